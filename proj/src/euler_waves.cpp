#include "vmlab/euler_waves.hpp"

#include <algorithm>
#include <cmath>

namespace vml {

CharFields characteristic_fields(const GasState& s) {
  s.validate();
  CharFields out;
  out.p = s.pressure();
  out.S = s.entropy();
  double p_rho = (5.0 / 3.0) * kStateK * std::cbrt(s.rho * s.rho) * std::exp(out.S);
  double c = std::sqrt(p_rho);
  out.lambda1 = s.u[0] - c;
  out.lambda2 = s.u[0];
  out.lambda3 = s.u[0] + c;
  return out;
}

RiemannInvariant3 riemann_invariant_3(const GasState& s) {
  s.validate();
  double S = s.entropy();
  double r31 = s.u[0] - std::sqrt(15.0 * kStateK) * std::cbrt(s.rho) * std::exp(S / 2.0);
  return {r31, S};
}

GasState curve_state_3(const GasState& left, double rho) {
  if (!(rho > 0.0)) throw domain_error("curve_state_3: rho must be > 0");
  double S = left.entropy();
  double r31 = riemann_invariant_3(left).r31;
  double u1 = r31 + std::sqrt(15.0 * kStateK) * std::cbrt(rho) * std::exp(S / 2.0);
  double theta = 1.5 * kStateK * std::exp(S) * std::cbrt(rho * rho);
  return GasState(rho, u1, theta);
}

RiemannReport validate_riemann_data(const RiemannData& d) {
  RiemannReport r;
  d.left.validate();
  d.right.validate();
  r.w_minus = characteristic_fields(d.left).lambda3;
  r.w_plus = characteristic_fields(d.right).lambda3;
  Vec3 du{d.right.u[0] - d.left.u[0], d.right.u[1] - d.left.u[1],
          d.right.u[2] - d.left.u[2]};
  r.sigma = std::abs(d.right.rho - d.left.rho) + norm(du) +
            std::abs(d.right.theta - d.left.theta);
  r.entropy_gap = std::abs(d.left.entropy() - d.right.entropy());
  r.r31_gap = std::abs(riemann_invariant_3(d.left).r31 - riemann_invariant_3(d.right).r31);

  if (d.left.u[1] != 0.0 || d.left.u[2] != 0.0 || d.right.u[1] != 0.0 ||
      d.right.u[2] != 0.0) {
    r.message = "transverse velocity nonzero";
    return r;
  }
  if (r.entropy_gap > 1e-10 * std::max(1.0, std::abs(d.left.entropy()))) {
    r.message = "entropy mismatch";
    return r;
  }
  if (r.r31_gap > 1e-8 * std::max(1.0, std::abs(r.w_plus))) {
    r.message = "states not on one 3-rarefaction curve";
    return r;
  }
  if (!(r.w_minus < r.w_plus)) {
    r.message = "not a 3-rarefaction (w- >= w+)";
    return r;
  }
  r.pass = true;
  r.message = "ok";
  return r;
}

GasState exact_fan_3(const RiemannData& d, double xi) {
  RiemannReport rep = validate_riemann_data(d);
  if (!rep.pass) throw domain_error("exact_fan_3: invalid Riemann data: " + rep.message);
  if (xi <= rep.w_minus) return d.left;
  if (xi >= rep.w_plus) return d.right;

  // lambda3(rho) = R31* + 4 c2 rho^{1/3} e^{S*/2}, c2 = sqrt(5k/3); strictly
  // increasing, so a safeguarded Newton on rho converges immediately.
  double S = d.left.entropy();
  double r31 = riemann_invariant_3(d.left).r31;
  double c2 = std::sqrt(5.0 * kStateK / 3.0);
  double amp = 4.0 * c2 * std::exp(S / 2.0);

  double lo = std::min(d.left.rho, d.right.rho);
  double hi = std::max(d.left.rho, d.right.rho);
  double cbrt_guess = (xi - r31) / amp;
  double rho = std::clamp(cbrt_guess * cbrt_guess * cbrt_guess, lo, hi);
  for (int it = 0; it < 60; ++it) {
    double lam = r31 + amp * std::cbrt(rho);
    double res = lam - xi;
    if (std::abs(res) <= 1e-12 * std::max(1.0, std::abs(xi))) break;
    if (res > 0.0)
      hi = rho;
    else
      lo = rho;
    double dlam = amp / (3.0 * std::cbrt(rho * rho));
    double next = rho - res / dlam;
    rho = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  return curve_state_3(d.left, rho);
}

RiemannData make_rarefaction_data(const GasState& left, double sigma_target) {
  if (!(sigma_target > 0.0)) throw domain_error("make_rarefaction_data: sigma must be > 0");
  double lo = left.rho, hi = left.rho;
  auto strength = [&](double rho_plus) {
    RiemannData d{left, curve_state_3(left, rho_plus)};
    return validate_riemann_data(d).sigma;
  };
  while (strength(hi) < sigma_target) hi *= 1.5;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (strength(mid) < sigma_target)
      lo = mid;
    else
      hi = mid;
  }
  return {left, curve_state_3(left, 0.5 * (lo + hi))};
}

}  // namespace vml
