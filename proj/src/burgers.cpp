#include "vmlab/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vml {

namespace {

double tanh_profile(double wm, double wp, double delta, double x) {
  return 0.5 * (wp + wm) + 0.5 * (wp - wm) * std::tanh(x / delta);
}
double tanh_profile_d1(double wm, double wp, double delta, double x) {
  double s = 1.0 / std::cosh(x / delta);
  return 0.5 * (wp - wm) * s * s / delta;
}
double tanh_profile_d2(double wm, double wp, double delta, double x) {
  double th = std::tanh(x / delta);
  double s = 1.0 / std::cosh(x / delta);
  return -(wp - wm) * th * s * s / (delta * delta);
}

}  // namespace

double initial_profile(double w_minus, double w_plus, double delta, double x) {
  if (!(delta > 0.0)) throw domain_error("initial_profile: delta must be > 0");
  return tanh_profile(w_minus, w_plus, delta, x);
}

CharSolution solve_characteristics(double wm, double wp, double delta, double t,
                                   double x) {
  if (!(delta > 0.0)) throw domain_error("solve_characteristics: delta must be > 0");
  if (!(t >= 0.0)) throw domain_error("solve_characteristics: t must be >= 0");
  if (!(wm < wp)) throw domain_error("solve_characteristics: requires w- < w+");

  // x0 -> x0 + w0(x0) t is strictly increasing; bracket is certain up to
  // roundoff in the far field, where a small pad absorbs cancellation
  double pad = 1e-8 * (1.0 + std::abs(x) + (std::abs(wm) + std::abs(wp)) * t);
  double lo = x - wp * t - pad, hi = x - wm * t + pad;
  if (lo > hi) std::swap(lo, hi);
  auto residual = [&](double x0) { return x0 + tanh_profile(wm, wp, delta, x0) * t - x; };
  double rl = residual(lo), rh = residual(hi);
  if (rl > 0.0 || rh < 0.0) throw solver_error("solve_characteristics: bracket failed");

  double x0 = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double r = residual(x0);
    if (std::abs(r) <= 0.25e-11 * (1.0 + std::abs(x))) break;
    if (r > 0.0)
      hi = x0;
    else
      lo = x0;
    double dr = 1.0 + tanh_profile_d1(wm, wp, delta, x0) * t;
    double next = x0 - r / dr;
    x0 = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }

  CharSolution out;
  out.x0 = x0;
  out.w = tanh_profile(wm, wp, delta, x0);
  double g = tanh_profile_d1(wm, wp, delta, x0);
  double gg = tanh_profile_d2(wm, wp, delta, x0);
  double den = 1.0 + g * t;
  out.wx = g / den;
  out.wxx = gg / (den * den * den);
  return out;
}

WaveProfile::WaveProfile(const RiemannData& d, double delta_, WaveKind kind_)
    : data(d), delta(delta_), kind(kind_) {
  RiemannReport rep = validate_riemann_data(d);
  if (!rep.pass && rep.sigma > 0.0)
    throw domain_error("WaveProfile: invalid Riemann data: " + rep.message);
  if (kind == WaveKind::smoothed && !(delta > 0.0))
    throw domain_error("WaveProfile: delta must be > 0");
  w_minus = rep.w_minus;
  w_plus = rep.w_plus;
  sigma = rep.sigma;
  S_star = d.left.entropy();
  r31 = riemann_invariant_3(d.left).r31;
}

namespace {

// Lift a Burgers value w to the gas state along the 3-curve:
//   lambda3 = r31 + 4 c2 e^{S/2} rho^{1/3} = w,  u1 = r31 + (3/4)(w - r31),
//   theta = (3/2) k e^S rho^{2/3}.
struct Lift {
  double rho, u1, theta;
  double drho_dw, dtheta_dw;      // du1/dw = 3/4 exactly
  double d2rho_dw2, d2theta_dw2;
};

Lift lift_from_w(const WaveProfile& p, double w) {
  double c2 = std::sqrt(5.0 * kStateK / 3.0);
  double amp = 4.0 * c2 * std::exp(p.S_star / 2.0);
  double X = (w - p.r31) / amp;  // = rho^{1/3}
  if (!(X > 0.0)) throw domain_error("wave lift: state left the positive cone");
  Lift L;
  L.rho = X * X * X;
  L.u1 = p.r31 + 0.75 * (w - p.r31);
  double ck = 1.5 * kStateK * std::exp(p.S_star);
  L.theta = ck * X * X;
  L.drho_dw = 3.0 * X * X / amp;
  L.d2rho_dw2 = 6.0 * X / (amp * amp);
  L.dtheta_dw = 2.0 * ck * X / amp;
  L.d2theta_dw2 = 2.0 * ck / (amp * amp);
  return L;
}

}  // namespace

GasState smooth_wave_state(const WaveProfile& p, double t, double x) {
  if (p.kind != WaveKind::smoothed)
    throw domain_error("smooth_wave_state: profile kind must be smoothed");
  if (p.sigma == 0.0) return p.data.left;
  CharSolution c = solve_characteristics(p.w_minus, p.w_plus, p.delta, t, x);
  Lift L = lift_from_w(p, c.w);
  return GasState(L.rho, L.u1, L.theta);
}

WaveLocal smooth_wave_local(const WaveProfile& p, double t, double x) {
  WaveLocal out{};
  if (p.sigma == 0.0) {
    out.state = p.data.left;
    out.w = p.w_minus;
    return out;
  }
  CharSolution c = solve_characteristics(p.w_minus, p.w_plus, p.delta, t, x);
  Lift L = lift_from_w(p, c.w);
  out.state = GasState(L.rho, L.u1, L.theta);
  out.w = c.w;
  out.wx = c.wx;
  out.wxx = c.wxx;
  out.drho_dx = L.drho_dw * c.wx;
  out.du1_dx = 0.75 * c.wx;
  out.dtheta_dx = L.dtheta_dw * c.wx;
  out.d2rho_dx2 = L.d2rho_dw2 * c.wx * c.wx + L.drho_dw * c.wxx;
  out.d2u1_dx2 = 0.75 * c.wxx;
  out.d2theta_dx2 = L.d2theta_dw2 * c.wx * c.wx + L.dtheta_dw * c.wxx;
  return out;
}

GasState wave_state(const WaveProfile& p, double t, double x) {
  if (p.kind == WaveKind::smoothed) return smooth_wave_state(p, t, x);
  if (!(t > 0.0)) throw domain_error("wave_state: exact fan needs t > 0");
  return exact_fan_3(p.data, x / t);
}

namespace {

// Integral of f over x at fixed t via the characteristic substitution
// x = x0 + w0(x0) t, uniform grid in s = x0/delta (integrand decays like
// powers of sech^2(s)).
template <typename F>
double integrate_over_x(const WaveProfile& p, double t, double s_max, int npts, F f) {
  double h = 2.0 * s_max / npts;
  double acc = 0.0;
  for (int i = 0; i <= npts; ++i) {
    double s = -s_max + i * h;
    double x0 = s * p.delta;
    double w0 = tanh_profile(p.w_minus, p.w_plus, p.delta, x0);
    double g = tanh_profile_d1(p.w_minus, p.w_plus, p.delta, x0);
    double jac = (1.0 + g * t) * p.delta;
    double wgt = (i == 0 || i == npts) ? 0.5 : 1.0;
    acc += wgt * f(x0 + w0 * t) * jac;
  }
  return acc * h;
}

}  // namespace

DecayFit fit_shifted_power_law(const std::vector<double>& ts,
                               const std::vector<double>& ys) {
  auto sse_at = [&](double t0, DecayFit* out) {
    std::size_t n = ts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double X = std::log(t0 + ts[i]);
      double Y = std::log(ys[i]);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      syy += Y * Y;
    }
    double nn = static_cast<double>(n);
    double den = nn * sxx - sx * sx;
    double slope = (nn * sxy - sx * sy) / den;
    double icept = (sy - slope * sx) / nn;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = std::log(ys[i]) - (icept + slope * std::log(t0 + ts[i]));
      sse += r * r;
    }
    if (out) {
      out->exponent = slope;
      out->shift = t0;
      out->constant = std::exp(icept);
      double sst = syy - sy * sy / nn;
      out->r_squared = (sst > 0.0) ? 1.0 - sse / sst : 1.0;
    }
    return sse;
  };

  if (ts.size() < 3) throw domain_error("fit_shifted_power_law: need >= 3 points");
  for (double y : ys)
    if (!(y > 0.0)) throw domain_error("fit_shifted_power_law: values must be > 0");

  // golden-section on the shift in [0, t_min*20]
  double a = 0.0, b = 20.0 * *std::min_element(ts.begin(), ts.end());
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = sse_at(c, nullptr), fd = sse_at(d, nullptr);
  for (int it = 0; it < 120; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = sse_at(c, nullptr);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = sse_at(d, nullptr);
    }
  }
  DecayFit fit;
  double t0 = 0.5 * (a + b);
  double s_shift = sse_at(t0, &fit);
  DecayFit fit0;
  double s_zero = sse_at(0.0, &fit0);
  return (s_zero <= s_shift) ? fit0 : fit;
}

DecayReport decay_report(const WaveProfile& p, const std::vector<double>& times,
                         const std::vector<double>& p_list) {
  if (p.sigma <= 0.0) throw domain_error("decay_report: zero-strength wave");
  DecayReport rep;
  const double s_max = 45.0;
  const int npts = 4000;
  const double inf = std::numeric_limits<double>::infinity();

  // boundary-tail criterion: derivative at the sample edge must be dead
  {
    double t = *std::max_element(times.begin(), times.end());
    WaveLocal edge = smooth_wave_local(p, t, s_max * p.delta + p.w_plus * t);
    if (std::abs(edge.du1_dx) > 1e-12)
      throw domain_error("decay_report: quadrature domain too small");
  }

  for (double pl : p_list) {
    for (int order = 1; order <= 2; ++order) {
      std::vector<double> norms;
      for (double t : times) {
        double nval = 0.0;
        if (pl == inf) {
          double best = 0.0;
          double h = 2.0 * s_max / npts;
          for (int i = 0; i <= npts; ++i) {
            double x0 = (-s_max + i * h) * p.delta;
            double w0 = tanh_profile(p.w_minus, p.w_plus, p.delta, x0);
            double g = tanh_profile_d1(p.w_minus, p.w_plus, p.delta, x0);
            double x = x0 + w0 * t;
            WaveLocal L = smooth_wave_local(p, t, x);
            double v = (order == 1)
                           ? std::max({std::abs(L.drho_dx), std::abs(L.du1_dx),
                                       std::abs(L.dtheta_dx)})
                           : std::max({std::abs(L.d2rho_dx2), std::abs(L.d2u1_dx2),
                                       std::abs(L.d2theta_dx2)});
            (void)g;
            best = std::max(best, v);
          }
          nval = best;
        } else {
          double acc = integrate_over_x(p, t, s_max, npts, [&](double x) {
            WaveLocal L = smooth_wave_local(p, t, x);
            double v = (order == 1)
                           ? std::max({std::abs(L.drho_dx), std::abs(L.du1_dx),
                                       std::abs(L.dtheta_dx)})
                           : std::max({std::abs(L.d2rho_dx2), std::abs(L.d2u1_dx2),
                                       std::abs(L.d2theta_dx2)});
            return std::pow(v, pl);
          });
          nval = std::pow(acc, 1.0 / pl);
        }
        norms.push_back(nval);
      }

      // Lemma-shape bound with fitted constant against the measured norms.
      double invp = (pl == inf) ? 0.0 : 1.0 / pl;
      double shape_c = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        double shape =
            (order == 1)
                ? std::pow(p.sigma, invp) *
                      std::pow(p.delta / p.sigma + times[i], -1.0 + invp)
                : std::pow(p.delta, -2.0 + 1.0 + invp) / (p.delta / p.sigma + times[i]);
        shape_c = std::max(shape_c, norms[i] / shape);
      }
      for (std::size_t i = 0; i < times.size(); ++i) {
        double shape =
            (order == 1)
                ? std::pow(p.sigma, invp) *
                      std::pow(p.delta / p.sigma + times[i], -1.0 + invp)
                : std::pow(p.delta, -2.0 + 1.0 + invp) / (p.delta / p.sigma + times[i]);
        rep.rows.push_back({times[i], pl, order, norms[i], shape_c * shape});
      }

      // u1-only norms drive the fitted exponent (the acceptance quantity)
      std::vector<double> u1norms;
      for (double t : times) {
        if (pl == inf) {
          CharSolution c0 = solve_characteristics(p.w_minus, p.w_plus, p.delta, t,
                                                  0.5 * (p.w_minus + p.w_plus) * t);
          // max of wx is at x0 = 0; du1/dx = (3/4) wx
          double g0 = tanh_profile_d1(p.w_minus, p.w_plus, p.delta, 0.0);
          (void)c0;
          double v = (order == 1)
                         ? 0.75 * g0 / (1.0 + g0 * t)
                         : [&] {
                             double best = 0.0;
                             double h = 2.0 * s_max / npts;
                             for (int i = 0; i <= npts; ++i) {
                               double x0 = (-s_max + i * h) * p.delta;
                               double w0 =
                                   tanh_profile(p.w_minus, p.w_plus, p.delta, x0);
                               WaveLocal L = smooth_wave_local(p, t, x0 + w0 * t);
                               best = std::max(best, std::abs(L.d2u1_dx2));
                             }
                             return best;
                           }();
          u1norms.push_back(v);
        } else {
          double acc = integrate_over_x(p, t, s_max, npts, [&](double x) {
            WaveLocal L = smooth_wave_local(p, t, x);
            double v = (order == 1) ? std::abs(L.du1_dx) : std::abs(L.d2u1_dx2);
            return std::pow(v, pl);
          });
          u1norms.push_back(std::pow(acc, 1.0 / pl));
        }
      }
      rep.fits.push_back(fit_shifted_power_law(times, u1norms));
      rep.p_values.push_back(pl);
      rep.orders.push_back(order);
    }
  }
  return rep;
}

double fan_distance(const WaveProfile& p, double t) {
  if (!(t > 0.0)) throw domain_error("fan_distance: t must be > 0");
  if (p.sigma == 0.0) return 0.0;
  WaveProfile smoothed = p;
  smoothed.kind = WaveKind::smoothed;

  double best = 0.0;
  auto probe = [&](double x) {
    GasState a = smooth_wave_state(smoothed, t, x);
    GasState b = exact_fan_3(p.data, x / t);
    best = std::max({best, std::abs(a.rho - b.rho), std::abs(a.u[0] - b.u[0]),
                     std::abs(a.theta - b.theta)});
  };
  // characteristic-parametrized sweep plus refinement near the fan edges
  const int npts = 3000;
  const double s_max = 45.0;
  for (int i = 0; i <= npts; ++i) {
    double x0 = (-s_max + 2.0 * s_max * i / npts) * p.delta;
    double w0 = tanh_profile(p.w_minus, p.w_plus, p.delta, x0);
    probe(x0 + w0 * t);
  }
  for (int i = 0; i <= 400; ++i) {
    double span = 20.0 * p.delta + 2.0;
    probe(p.w_minus * t - span + i * (2.0 * span) / 400.0);
    probe(p.w_plus * t - span + i * (2.0 * span) / 400.0);
  }
  return best;
}

}  // namespace vml
