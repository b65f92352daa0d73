#include "vmlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace vml {

PerturbationFields perturbation_fields(const FluidEMState& s, const WaveProfile& wave) {
  PerturbationFields p;
  p.phi.resize(s.nx);
  p.psi1.resize(s.nx);
  p.psi2.resize(s.nx);
  p.psi3.resize(s.nx);
  p.zeta.resize(s.nx);
  for (int i = 0; i < s.nx; ++i) {
    GasState w = wave.sigma > 0.0 ? smooth_wave_state(wave, s.time, s.x_center(i))
                                  : wave.data.left;
    p.phi[i] = s.rho[i] - w.rho;
    p.psi1[i] = s.u1(i) - w.u[0];
    p.psi2[i] = s.u2(i);
    p.psi3[i] = s.u3(i);
    p.zeta[i] = s.theta(i) - w.theta;
  }
  return p;
}

EntropyPair entropy_pair(const FluidEMState& s, const WaveProfile& wave) {
  auto Phi = [](double x) { return x - std::log(x) - 1.0; };
  EntropyPair out;
  out.eta.resize(s.nx);
  out.q.resize(s.nx);
  for (int i = 0; i < s.nx; ++i) {
    GasState w = wave.sigma > 0.0 ? smooth_wave_state(wave, s.time, s.x_center(i))
                                  : wave.data.left;
    double rho = s.rho[i], th = s.theta(i);
    if (!(rho > 0.0) || !(th > 0.0) || !(w.rho > 0.0) || !(w.theta > 0.0))
      throw domain_error("entropy_pair: nonpositive density or temperature");
    double u1 = s.u1(i), u2 = s.u2(i), u3 = s.u3(i);
    double du1 = u1 - w.u[0];
    double eta = kGasR * rho * w.theta * Phi(w.rho / rho) +
                 rho * w.theta * Phi(th / w.theta) +
                 0.5 * rho * (du1 * du1 + u2 * u2 + u3 * u3);
    double phi = rho - w.rho, zeta = th - w.theta;
    out.eta[i] = eta;
    out.q[i] = u1 * eta + kGasR * (phi * du1 * w.theta + rho * du1 * zeta);
    out.integral_dx += eta * s.dx;
  }
  return out;
}

double q1_recipe(double eps, double a, double delta, double T, double q2) {
  double d32 = std::pow(delta, 1.5);
  double lo = std::pow(1.0 + T, 3.0) / q2 *
              (std::pow(eps, 1.0 - 0.5 * a) + std::pow(eps, 0.5 + 0.5 * a)) / d32;
  return std::clamp(lo, 1e-6, 0.99);
}

// ---------------------------------------------------------------------------
// closure context

ClosureContext::ClosureContext(const RunConfig& cfg, const DiagOptions& opt,
                               double theta_max, double u_max)
    : opt_(opt), params_(cfg.collision) {
  double vmax = VelocityGrid::default_v_max(u_max, theta_max);
  grid_ = std::make_unique<VelocityGrid>(opt.n_diag, vmax);
  mu_ = global_maxwellian(*grid_);
  sqrt_mu_ = KineticField(*grid_);
  for (std::size_t i = 0; i < mu_.size(); ++i) sqrt_mu_[i] = std::sqrt(mu_[i]);
  auto eng = LandauEngine::shared(*grid_, params_);
  sigma_ = sigma_matrix(*eng);
  ref_ = ReferenceProfiles::shared(opt.n_ref, params_);
}

namespace {

// smooth far-tail window: the closure profiles decay like M^{1-eps0}; beyond
// the window radius only inverse-solver noise remains, which the 1/sqrt(mu)
// factor would amplify
inline double tail_window(double r2) {
  constexpr double r0 = 5.5, r1 = 7.0;
  if (r2 <= r0 * r0) return 1.0;
  double r = std::sqrt(r2);
  if (r >= r1) return 0.0;
  double c = std::cos(0.5 * 3.14159265358979323846 * (r - r0) / (r1 - r0));
  return c * c;
}

inline double trilinear(const KineticField& f, double g1, double g2, double g3) {
  const VelocityGrid& g = *f.grid;
  int n = g.n();
  if (g1 < 0.0 || g2 < 0.0 || g3 < 0.0 || g1 > n - 1.0 || g2 > n - 1.0 || g3 > n - 1.0)
    return 0.0;
  int i1 = std::min(static_cast<int>(g1), n - 2);
  int i2 = std::min(static_cast<int>(g2), n - 2);
  int i3 = std::min(static_cast<int>(g3), n - 2);
  double f1 = g1 - i1, f2 = g2 - i2, f3 = g3 - i3;
  double acc = 0.0;
  for (int d3 = 0; d3 < 2; ++d3)
    for (int d2 = 0; d2 < 2; ++d2)
      for (int d1 = 0; d1 < 2; ++d1) {
        double w = (d1 ? f1 : 1.0 - f1) * (d2 ? f2 : 1.0 - f2) * (d3 ? f3 : 1.0 - f3);
        acc += w * f[g.index(i1 + d1, i2 + d2, i3 + d3)];
      }
  return acc;
}

}  // namespace

void ClosureContext::profile_at(double u1_bar, double theta_bar, const Vec3& v,
                                double* A1, double* B11, double* B12, double* B13,
                                double* S1, double* S2, double* S3) const {
  double isrt = 1.0 / std::sqrt(kGasR * theta_bar);
  Vec3 vt{(v[0] - u1_bar) * isrt, v[1] * isrt, v[2] * isrt};
  const VelocityGrid& rg = ref_->grid;
  double ih = 1.0 / rg.h();
  double g1 = (vt[0] + rg.v_max()) * ih;
  double g2 = (vt[1] + rg.v_max()) * ih;
  double g3 = (vt[2] + rg.v_max()) * ih;
  double w = tail_window(dot(vt, vt));
  if (w == 0.0) {
    *A1 = *B11 = *B12 = *B13 = *S1 = *S2 = *S3 = 0.0;
    return;
  }
  *A1 = w * trilinear(ref_->A1, g1, g2, g3);
  *B11 = w * trilinear(ref_->B11, g1, g2, g3);
  *B12 = w * trilinear(ref_->B12, g1, g2, g3);
  *B13 = w * trilinear(ref_->B13, g1, g2, g3);
  if (S1) {
    *S1 = w * trilinear(ref_->S1, g1, g2, g3);
    // S2, S3 by axis relabeling of the isotropic solve
    *S2 = w * trilinear(ref_->S1, g2, g1, g3);
    *S3 = w * trilinear(ref_->S1, g3, g2, g1);
  }
}

ClosureContext::Column ClosureContext::build_column(const FluidSolver::History& h,
                                                    const WaveProfile& wave, int k,
                                                    int i) const {
  const FluidEMState& s = h.snapshots[k];
  const RunConfig& cfg = h.config;
  double eps = cfg.eps, a = cfg.a;
  double x = s.x_center(i);
  int il = std::max(i - 1, 0), ir = std::min(i + 1, s.nx - 1);
  double den = (ir - il) * s.dx;

  auto wave_at = [&](double xx) {
    return wave.sigma > 0.0 ? smooth_wave_state(wave, s.time, xx) : wave.data.left;
  };
  GasState wl = wave_at(x);
  double th_bar = wl.theta, u1_bar = wl.u[0];

  auto dstate = [&](auto get) { return (get(ir) - get(il)) / den; };
  double dth = dstate([&](int j) { return s.theta(j); });
  double du1 = dstate([&](int j) { return s.u1(j); });
  double du2 = dstate([&](int j) { return s.u2(j); });
  double du3 = dstate([&](int j) { return s.u3(j); });
  double dnr = dstate([&](int j) { return s.n[j] / s.rho[j]; });
  // same stencil on the wave so perturbation gradients are exactly linear
  // in the perturbation
  double dth_bar =
      (wave_at(s.x_center(ir)).theta - wave_at(s.x_center(il)).theta) / den;
  double du1_bar =
      (wave_at(s.x_center(ir)).u[0] - wave_at(s.x_center(il)).u[0]) / den;

  double ya = std::pow(eps, a);       // dy = dx / eps^a => d/dy = eps^a d/dx
  double pref = std::pow(eps, 1.0 - a);
  double sA = std::pow(kGasR * th_bar, -0.5 * (3.0 + params_.gamma));
  double sX = std::pow(kGasR * th_bar, -0.5 * (params_.gamma + 2.0));

  // g1 coefficients: perturbation gradients; G1 coefficients: full gradients
  double cst = std::sqrt(kGasR) / std::sqrt(th_bar);
  double cA_pert = pref * cst * ya * (dth - dth_bar);
  double cB1_pert = pref * ya * (du1 - du1_bar);
  double cB2_pert = pref * ya * du2;
  double cB3_pert = pref * ya * du3;
  double cA_full = pref * cst * ya * dth;
  double cB1_full = pref * ya * du1;

  // G2 closure: eps^{1-a} d_y(n/rho) X_1 - eps (E + u x B)/(R theta) . X
  double e1 = s.e1_center(i);
  double u1v = s.u1(i), u2v = s.u2(i), u3v = s.u3(i);
  double f1 = e1 + u2v * s.b3[i] - u3v * s.b2[i];
  double f2 = s.e2[i] - u1v * s.b3[i];
  double f3 = s.e3[i] + u1v * s.b2[i];
  double cS1 = pref * ya * dnr - eps * f1 / (kGasR * th_bar);
  double cS2 = -eps * f2 / (kGasR * th_bar);
  double cS3 = -eps * f3 / (kGasR * th_bar);

  GasState full(std::max(s.rho[i], 1e-300),
                Vec3{u1v, u2v, u3v}, std::max(s.theta(i), 1e-300));
  double mpref = full.rho / std::pow(2.0 * 3.14159265358979323846 * kGasR *
                                         full.theta,
                                     1.5);
  double inv2rt = 1.0 / (2.0 * kGasR * full.theta);
  double nr = s.n[i] / s.rho[i];

  Column col;
  std::size_t nn = grid_->size();
  col.g1.resize(nn);
  col.g2.resize(nn);
  col.f1w.resize(nn);
  col.f2w.resize(nn);
  for (std::size_t idx = 0; idx < nn; ++idx) {
    Vec3 v = grid_->node(idx);
    double A1, B11, B12, B13, S1, S2, S3;
    profile_at(u1_bar, th_bar, v, &A1, &B11, &B12, &B13, &S1, &S2, &S3);
    double ismu = 1.0 / sqrt_mu_[idx];
    double g1v = (cA_pert * A1 + cB1_pert * B11 + cB2_pert * B12 + cB3_pert * B13) *
                 sA * ismu;
    double G1_full = (cA_full * A1 + cB1_full * B11 + cB2_pert * B12 +
                      cB3_pert * B13) *
                     sA;
    double g2v = (cS1 * S1 + cS2 * S2 + cS3 * S3) * sX * ismu;
    col.g1[idx] = g1v;
    col.g2[idx] = g2v;
    Vec3 d{v[0] - full.u[0], v[1] - full.u[1], v[2] - full.u[2]};
    double M = mpref * std::exp(-dot(d, d) * inv2rt);
    col.f1w[idx] = M * ismu + G1_full * ismu;
    col.f2w[idx] = nr * M * ismu + g2v;
  }
  return col;
}

double ClosureContext::micro_err_f1(const FluidEMState& s, int i,
                                    const WaveProfile& wave,
                                    const GasState& ref) const {
  // reuse build_column's F1 via a small local assembly: (M_state - M_ref +
  // G1_full)/sqrt(mu), L2_v norm
  FluidSolver::History h;  // not needed; direct assembly below
  (void)h;
  (void)wave;
  double acc = 0.0;
  GasState full(s.rho[i], Vec3{s.u1(i), s.u2(i), s.u3(i)}, s.theta(i));
  double mp1 = full.rho /
               std::pow(2.0 * 3.14159265358979323846 * kGasR * full.theta, 1.5);
  double i1 = 1.0 / (2.0 * kGasR * full.theta);
  double mp2 =
      ref.rho / std::pow(2.0 * 3.14159265358979323846 * kGasR * ref.theta, 1.5);
  double i2 = 1.0 / (2.0 * kGasR * ref.theta);
  for (std::size_t idx = 0; idx < grid_->size(); ++idx) {
    Vec3 v = grid_->node(idx);
    Vec3 d1{v[0] - full.u[0], v[1] - full.u[1], v[2] - full.u[2]};
    Vec3 d2{v[0] - ref.u[0], v[1] - ref.u[1], v[2] - ref.u[2]};
    double diff = mp1 * std::exp(-dot(d1, d1) * i1) - mp2 * std::exp(-dot(d2, d2) * i2);
    double w = diff / sqrt_mu_[idx];
    acc += w * w;
  }
  return std::sqrt(acc * grid_->cell_volume());
}

double ClosureContext::micro_err_f2(const FluidEMState& s, int i,
                                    const WaveProfile& wave) const {
  (void)wave;
  double acc = 0.0;
  GasState full(s.rho[i], Vec3{s.u1(i), s.u2(i), s.u3(i)}, s.theta(i));
  double mp = full.rho /
              std::pow(2.0 * 3.14159265358979323846 * kGasR * full.theta, 1.5);
  double iv = 1.0 / (2.0 * kGasR * full.theta);
  double nr = s.n[i] / s.rho[i];
  for (std::size_t idx = 0; idx < grid_->size(); ++idx) {
    Vec3 v = grid_->node(idx);
    Vec3 d{v[0] - full.u[0], v[1] - full.u[1], v[2] - full.u[2]};
    double w = nr * mp * std::exp(-dot(d, d) * iv) / sqrt_mu_[idx];
    acc += w * w;
  }
  return std::sqrt(acc * grid_->cell_volume());
}

double ClosureContext::omega_norm_sq(const std::vector<double>& f, const WeightSpec& w,
                                     double t, bool with_bracket_v) const {
  double acc = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    Vec3 v = grid_->node(idx);
    double om = weight_omega(w, t, v);
    double val = f[idx] * om;
    if (with_bracket_v) val *= std::sqrt(1.0 + dot(v, v));
    acc += val * val;
  }
  return acc * grid_->cell_volume();
}

std::vector<double> ClosureContext::beta_derivative(const std::vector<double>& f,
                                                    int axis) const {
  KineticField tmp(*grid_);
  tmp.values = f;
  return velocity_derivative(tmp, axis).values;
}

double ClosureContext::sigma_omega_norm_sq(const std::vector<double>& f,
                                           const WeightSpec& w, double t) const {
  KineticField tmp(*grid_);
  tmp.values = f;
  return sigma_norm_sq(tmp, sigma_, w, t);
}

// ---------------------------------------------------------------------------
// energy functionals

namespace {

struct WaveCache {
  std::vector<WaveLocal> loc;  // per cell
};

WaveCache wave_cache(const WaveProfile& wave, const FluidEMState& s) {
  WaveCache c;
  c.loc.resize(s.nx);
  for (int i = 0; i < s.nx; ++i) {
    if (wave.sigma > 0.0) {
      c.loc[i] = smooth_wave_local(wave, s.time, s.x_center(i));
    } else {
      c.loc[i] = WaveLocal{};
      c.loc[i].state = wave.data.left;
    }
  }
  return c;
}

// fluid perturbation component values, c in:
// 0 phi, 1..3 psi, 4 zeta, 5 n, 6..8 E, 9..10 B2,B3
constexpr int kFluidComponents = 11;

double fluid_component(const FluidEMState& s, const WaveCache& w, int c, int i) {
  switch (c) {
    case 0: return s.rho[i] - w.loc[i].state.rho;
    case 1: return s.u1(i) - w.loc[i].state.u[0];
    case 2: return s.u2(i);
    case 3: return s.u3(i);
    case 4: return s.theta(i) - w.loc[i].state.theta;
    case 5: return s.n[i];
    case 6: return s.e1_center(i);
    case 7: return s.e2[i];
    case 8: return s.e3[i];
    case 9: return s.b2[i];
    default: return s.b3[i];
  }
}

}  // namespace

EnergyReport energy_functionals(const FluidSolver::History& h, const DiagOptions& opt0) {
  if (h.snapshots.size() < 3)
    throw domain_error("energy_functionals: need at least 3 snapshots");
  DiagOptions opt = opt0;
  const RunConfig& cfg = h.config;
  double eps = cfg.eps, a = cfg.a;
  const int K = static_cast<int>(h.snapshots.size());
  const int nx = h.snapshots[0].nx;
  const double dx = h.snapshots[0].dx;
  const double dt = h.snapshots[1].time - h.snapshots[0].time;
  if (opt.x_stride <= 0) opt.x_stride = std::max(1, nx / 128);

  WaveProfile wave(cfg.data, cfg.delta, WaveKind::smoothed);

  double theta_max = 0.0, u_max = 0.0;
  for (const auto& s : h.snapshots)
    for (int i = 0; i < nx; ++i) {
      theta_max = std::max(theta_max, s.theta(i));
      u_max = std::max(u_max, std::abs(s.u1(i)));
    }
  ClosureContext ctx(cfg, opt, theta_max, u_max);

  std::vector<WaveCache> waves(K);
  for (int k = 0; k < K; ++k) waves[k] = wave_cache(wave, h.snapshots[k]);

  double ea = std::pow(eps, a);

  auto fluid_deriv = [&](int c, int k, int i, int at, int ax, double ht,
                         double hx) -> double {
    auto val = [&](int kk, int ii) {
      kk = std::clamp(kk, 0, K - 1);
      ii = std::clamp(ii, 0, nx - 1);
      return fluid_component(h.snapshots[kk], waves[kk], c, ii);
    };
    auto dt_of = [&](int ii) -> double {
      if (at == 0) return val(k, ii);
      if (at == 1) return (val(k + 1, ii) - val(k - 1, ii)) / (2.0 * ht);
      return (val(k + 1, ii) - 2.0 * val(k, ii) + val(k - 1, ii)) / (ht * ht);
    };
    if (ax == 0) return dt_of(i);
    if (ax == 1) return (dt_of(i + 1) - dt_of(i - 1)) / (2.0 * hx);
    return (dt_of(i + 1) - 2.0 * dt_of(i) + dt_of(i - 1)) / (hx * hx);
  };

  EnergyReport rep;
  for (int k = 1; k + 1 < K; ++k) {
    const FluidEMState& s = h.snapshots[k];
    EnergyRow row;
    row.t = s.time;
    row.tau = s.time / ea;
    row.gauss_residual = FluidSolver::gauss_residual(s);
    EntropyPair ep = entropy_pair(s, wave);
    row.entropy_integral = ep.integral_dx / ea;

    // ----- fluid derivative blocks, both variable systems
    // unscaled (t, x): spacing (dt, dx), measure dx
    // scaled (tau, y): spacing (dt/ea, dx/ea), measure dx/ea
    auto fluid_block = [&](const std::pair<int, int>& al, bool scaled) {
      double ht = scaled ? dt / ea : dt;
      double hx = scaled ? dx / ea : dx;
      double meas = scaled ? dx / ea : dx;
      double acc = 0.0;
      for (int i = 1; i + 1 < nx; ++i)
        for (int c = 0; c < kFluidComponents; ++c) {
          double d = fluid_deriv(c, k, i, al.first, al.second, ht, hx);
          acc += d * d;
        }
      return acc * meas;
    };

    // ----- microscopic blocks on strided columns
    // Unscaled-variable derivatives are computed once; the scaled-variable
    // derivative for a multi-index of order |al| is exactly eps^{a|al|} times
    // the unscaled one (same stencil, rescaled spacings).
    struct MicroNorms {
      double om_sq = 0.0;      // ||d^al (g1,g2)||_omega^2
      double om_sq_v = 0.0;    // with the <v> bracket
      double sig_om_sq = 0.0;  // sigma,omega norm
      double fw_sq_v = 0.0;    // ||<v> mu^{-1/2} d^al (F1,F2)||_omega^2
    };
    std::array<MicroNorms, 6> micro;  // indexed by alpha1 then alpha2
    const std::array<std::pair<int, int>, 6> alphas{
        {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

    double meas_x = dx * opt.x_stride;
    double meas_y = meas_x / ea;
    double t_now = s.time;

    for (int i = 1; i + 1 < nx; i += opt.x_stride) {
      ClosureContext::Column nb[3][3];
      for (int dk = -1; dk <= 1; ++dk)
        for (int di = -1; di <= 1; ++di) {
          int kk = std::clamp(k + dk, 0, K - 1);
          int ii = std::clamp(i + di, 1, nx - 2);
          nb[dk + 1][di + 1] = ctx.build_column(h, wave, kk, ii);
        }
      std::size_t nn = ctx.grid().size();
      auto deriv = [&](auto field, const std::pair<int, int>& al) {
        std::vector<double> g(nn);
        auto at = [&](int dk, int di) -> const std::vector<double>& {
          return field(nb[dk + 1][di + 1]);
        };
        for (std::size_t q = 0; q < nn; ++q) {
          auto dt_of = [&](int di) {
            if (al.first == 0) return at(0, di)[q];
            if (al.first == 1) return (at(1, di)[q] - at(-1, di)[q]) / (2.0 * dt);
            return (at(1, di)[q] - 2.0 * at(0, di)[q] + at(-1, di)[q]) / (dt * dt);
          };
          if (al.second == 0)
            g[q] = dt_of(0);
          else if (al.second == 1)
            g[q] = (dt_of(1) - dt_of(-1)) / (2.0 * dx);
          else
            g[q] = (dt_of(1) - 2.0 * dt_of(0) + dt_of(-1)) / (dx * dx);
        }
        return g;
      };
      for (int ai = 0; ai < 6; ++ai) {
        const auto& al = alphas[ai];
        WeightSpec w = opt.weight;
        w.alpha_order = al.first + al.second;
        w.beta_order = 0;
        std::vector<double> d1 = deriv(
            [](const ClosureContext::Column& c) -> const std::vector<double>& {
              return c.g1;
            },
            al);
        std::vector<double> d2 = deriv(
            [](const ClosureContext::Column& c) -> const std::vector<double>& {
              return c.g2;
            },
            al);
        micro[ai].om_sq +=
            ctx.omega_norm_sq(d1, w, t_now, false) + ctx.omega_norm_sq(d2, w, t_now, false);
        micro[ai].om_sq_v +=
            ctx.omega_norm_sq(d1, w, t_now, true) + ctx.omega_norm_sq(d2, w, t_now, true);
        micro[ai].sig_om_sq += ctx.sigma_omega_norm_sq(d1, w, t_now) +
                               ctx.sigma_omega_norm_sq(d2, w, t_now);
        if (al.first + al.second == 2) {
          std::vector<double> df1 = deriv(
              [](const ClosureContext::Column& c) -> const std::vector<double>& {
                return c.f1w;
              },
              al);
          std::vector<double> df2 = deriv(
              [](const ClosureContext::Column& c) -> const std::vector<double>& {
                return c.f2w;
              },
              al);
          micro[ai].fw_sq_v += ctx.omega_norm_sq(df1, w, t_now, true) +
                               ctx.omega_norm_sq(df2, w, t_now, true);
        }
      }
    }

    // assemble E_tilde (unscaled) and E_scaled / D / F_omega (scaled)
    double e_tilde = 0.0, e_scaled = 0.0, dissipation = 0.0, f_omega = 0.0;

    for (int ai = 0; ai < 6; ++ai) {
      const auto& al = alphas[ai];
      int order = al.first + al.second;
      // scaled micro derivative = eps^{a |al|} * unscaled
      double sc = std::pow(ea, 2.0 * order);
      if (order <= 1) {
        double pf_t = std::pow(eps, (2.0 * order - 1.0) * a);
        e_tilde += pf_t * (fluid_block(al, false) + micro[ai].om_sq * meas_x);
        e_scaled += fluid_block(al, true) + sc * micro[ai].om_sq * meas_y;
        dissipation += std::pow(eps, a - 1.0) * sc * micro[ai].sig_om_sq * meas_y;
        f_omega += std::pow(eps, a) * sc * micro[ai].om_sq_v * meas_y;
      } else {
        double pf_t = std::pow(eps, 2.0 + a);
        double pf_s = std::pow(eps, 2.0 - 2.0 * a);
        e_tilde += pf_t * (fluid_block(al, false) + micro[ai].om_sq * meas_x);
        e_scaled += pf_s * (fluid_block(al, true) + sc * micro[ai].om_sq * meas_y);
        dissipation += std::pow(eps, 1.0 - a) * sc * micro[ai].sig_om_sq * meas_y;
        f_omega += std::pow(eps, 2.0 - a) * sc * micro[ai].fw_sq_v * meas_y;
      }
      if (order >= 1) {
        // eps^{1-a} ||d^al (phi,psi,zeta,n)||^2, and for |al| = 1 also
        // eps^{1+a} ||d^al (E,B)||^2 (scaled variables)
        double eb = 0.0, fl = 0.0;
        double ht = dt / ea, hx = dx / ea;
        for (int i = 1; i + 1 < nx; ++i) {
          for (int c = 0; c < 6; ++c) {
            double d = fluid_deriv(c, k, i, al.first, al.second, ht, hx);
            fl += d * d;
          }
          if (order == 1)
            for (int c = 6; c < 11; ++c) {
              double d = fluid_deriv(c, k, i, al.first, al.second, ht, hx);
              eb += d * d;
            }
        }
        dissipation += std::pow(eps, 1.0 - a) * fl * (dx / ea);
        if (order == 1) dissipation += std::pow(eps, 1.0 + a) * eb * (dx / ea);
      }
    }
    // zero-order dissipation block: eps^{1+a} ||(n, E + u x B)||^2
    {
      double acc = 0.0;
      for (int i = 0; i < nx; ++i) {
        double f1 = s.e1_center(i) + s.u2(i) * s.b3[i] - s.u3(i) * s.b2[i];
        double f2 = s.e2[i] - s.u1(i) * s.b3[i];
        double f3 = s.e3[i] + s.u1(i) * s.b2[i];
        acc += s.n[i] * s.n[i] + f1 * f1 + f2 * f2 + f3 * f3;
      }
      dissipation += std::pow(eps, 1.0 + a) * acc * dx / ea;
    }

    // |beta| >= 1 blocks (optional)
    if (opt.beta_blocks) {
      for (const auto& al : alphas) {
        if (al.first + al.second > 1) continue;
        WeightSpec w = opt.weight;
        w.alpha_order = al.first + al.second;
        for (int i = 1; i + 1 < nx; i += opt.x_stride) {
          ClosureContext::Column c0 = ctx.build_column(h, wave, k, i);
          for (int ax = 0; ax < 3; ++ax) {
            w.beta_order = 1;
            std::vector<double> b1 = ctx.beta_derivative(c0.g1, ax);
            std::vector<double> b2 = ctx.beta_derivative(c0.g2, ax);
            double pf_t = std::pow(eps, (2.0 * (al.first + al.second) - 1.0) * a);
            double nm = ctx.omega_norm_sq(b1, w, t_now, false) +
                        ctx.omega_norm_sq(b2, w, t_now, false);
            e_tilde += pf_t * nm * meas_x;
            e_scaled += nm * meas_y;
            dissipation += std::pow(eps, a - 1.0) *
                           (ctx.sigma_omega_norm_sq(b1, w, t_now) +
                            ctx.sigma_omega_norm_sq(b2, w, t_now)) *
                           meas_y;
            f_omega += std::pow(eps, a) * (ctx.omega_norm_sq(b1, w, t_now, true) +
                                           ctx.omega_norm_sq(b2, w, t_now, true)) *
                       meas_y;
          }
        }
      }
    }

    row.e_tilde = e_tilde;
    row.e_scaled = e_scaled;
    row.dissipation = dissipation;
    row.f_omega = f_omega;

    row.err_smoothed = wave_error(s, wave, ctx, WaveReference::smoothed);
    if (s.time >= opt.h_min_fan && wave.sigma > 0.0) {
      WaveProfile fan = wave;
      fan.kind = WaveKind::exact_fan;
      row.err_fan = wave_error(s, fan, ctx, WaveReference::exact_fan);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

WaveError wave_error(const FluidEMState& s, const WaveProfile& wave,
                     const ClosureContext& ctx, WaveReference ref) {
  WaveError e;
  if (ref == WaveReference::exact_fan && !(s.time > 0.0))
    throw domain_error("wave_error: exact-fan reference needs t > 0");
  auto ref_state = [&](double x) -> GasState {
    if (wave.sigma == 0.0) return wave.data.left;
    if (ref == WaveReference::smoothed) return smooth_wave_state(wave, s.time, x);
    return exact_fan_3(wave.data, x / s.time);
  };
  for (int i = 0; i < s.nx; ++i) {
    GasState r = ref_state(s.x_center(i));
    e.sup_rho = std::max(e.sup_rho, std::abs(s.rho[i] - r.rho));
    e.sup_u = std::max({e.sup_u, std::abs(s.u1(i) - r.u[0]), std::abs(s.u2(i)),
                        std::abs(s.u3(i))});
    e.sup_theta = std::max(e.sup_theta, std::abs(s.theta(i) - r.theta));
    double eb = std::max({std::abs(s.e1_center(i)), std::abs(s.e2[i]),
                          std::abs(s.e3[i]), std::abs(s.b2[i]), std::abs(s.b3[i])});
    e.eb_sup = std::max(e.eb_sup, eb);
  }
  e.fluid_sup = std::max({e.sup_rho, e.sup_u, e.sup_theta});
  int stride = std::max(1, ctx.options().x_stride);
  for (int i = 1; i + 1 < s.nx; i += stride) {
    GasState r = ref_state(s.x_center(i));
    e.micro_f1 = std::max(e.micro_f1, ctx.micro_err_f1(s, i, wave, r));
    e.micro_f2 = std::max(e.micro_f2, ctx.micro_err_f2(s, i, wave));
  }
  e.mt_metric_sq = e.micro_f1 * e.micro_f1 + e.micro_f2 * e.micro_f2 +
                   e.eb_sup * e.eb_sup;
  return e;
}

RateFit rate_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 4)
    throw domain_error("rate_fit: need >= 4 points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw domain_error("rate_fit: values must be positive");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double X = std::log(xs[i]), Y = std::log(ys[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    syy += Y * Y;
  }
  RateFit f;
  double den = n * sxx - sx * sx;
  if (den == 0.0) throw domain_error("rate_fit: degenerate abscissae");
  f.exponent = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.exponent * sx) / n;
  double sst = syy - sy * sy / n;
  if (sst <= 1e-30) {
    f.r_squared = 0.0;
    f.uninformative = true;
    f.exponent = 0.0;
    return f;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = std::log(ys[i]) - (f.intercept + f.exponent * std::log(xs[i]));
    sse += r * r;
  }
  f.r_squared = 1.0 - sse / sst;
  return f;
}

}  // namespace vml
