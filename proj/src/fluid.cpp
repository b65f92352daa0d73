#include "vmlab/fluid.hpp"

#include <algorithm>
#include <cmath>

namespace vml {

// ---------------------------------------------------------------------------
// transport table

TransportTable::Spline TransportTable::make_spline(const std::vector<double>& x,
                                                   const std::vector<double>& y) {
  // Fritsch-Carlson monotone cubic slopes
  std::size_t n = x.size();
  Spline s;
  s.y = y;
  s.slope.assign(n, 0.0);
  if (n == 1) return s;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  s.slope[0] = d[0];
  s.slope[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    s.slope[i] = (d[i - 1] * d[i] > 0.0) ? 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]) : 0.0;
  return s;
}

TransportTable TransportTable::build(const CollisionParams& p,
                                     std::vector<double> theta_knots, int n_knot,
                                     const CgOptions& opt) {
  std::sort(theta_knots.begin(), theta_knots.end());
  TransportTable t;
  t.knots_ = theta_knots;
  std::vector<double> k1, k2, sg;
  for (double th : theta_knots) {
    TransportCoeffs c = transport_coefficients(th, n_knot, p, opt);
    k1.push_back(c.kappa1);
    k2.push_back(c.kappa2);
    sg.push_back(c.sigma_theta);
  }
  t.k1_ = make_spline(theta_knots, k1);
  t.k2_ = make_spline(theta_knots, k2);
  t.sg_ = make_spline(theta_knots, sg);
  return t;
}

TransportTable TransportTable::constant(double kappa1, double kappa2, double sigma) {
  TransportTable t;
  t.c1_ = kappa1;
  t.c2_ = kappa2;
  t.cs_ = sigma;
  return t;
}

double TransportTable::eval(const Spline& s, double theta) const {
  if (knots_.empty()) {
    if (&s == &k1_) return c1_;
    if (&s == &k2_) return c2_;
    return cs_;
  }
  const auto& x = knots_;
  if (theta <= x.front()) return s.y.front() + s.slope.front() * (theta - x.front());
  if (theta >= x.back()) return s.y.back() + s.slope.back() * (theta - x.back());
  std::size_t i = std::upper_bound(x.begin(), x.end(), theta) - x.begin() - 1;
  double h = x[i + 1] - x[i];
  double tt = (theta - x[i]) / h;
  double h00 = (1 + 2 * tt) * (1 - tt) * (1 - tt);
  double h10 = tt * (1 - tt) * (1 - tt);
  double h01 = tt * tt * (3 - 2 * tt);
  double h11 = tt * tt * (tt - 1);
  return h00 * s.y[i] + h10 * h * s.slope[i] + h01 * s.y[i + 1] + h11 * h * s.slope[i + 1];
}

// ---------------------------------------------------------------------------
// config

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw domain_error("RunConfig: eps must be > 0");
  if (!(a > 1.0 / 3.0 && a < 1.0))
    throw domain_error("RunConfig: a must lie in (1/3, 1)");
  if (!(cfl > 0.0 && cfl < 1.0)) throw domain_error("RunConfig: cfl must be in (0,1)");
  if (nx < 16) throw domain_error("RunConfig: nx too small");
  if (!(t_end > 0.0)) throw domain_error("RunConfig: t_end must be > 0");
  if (snapshots < 2) throw domain_error("RunConfig: need >= 2 snapshots");
  collision.validate();
}

void auto_domain(RunConfig& cfg) {
  RiemannReport rep = validate_riemann_data(cfg.data);
  double tails = std::max(16.0 * cfg.delta, 1.0);
  double lo = std::min(0.0, rep.w_minus * cfg.t_end) - tails;
  double hi = std::max(0.0, rep.w_plus * cfg.t_end) + tails;
  double pad = 0.15 * (hi - lo);
  cfg.x_lo = lo - pad;
  cfg.x_hi = hi + pad;
}

// ---------------------------------------------------------------------------
// solver

FluidSolver::FluidSolver(const RunConfig& cfg, std::shared_ptr<const TransportTable> table)
    : cfg_(cfg),
      table_(std::move(table)),
      wave_(cfg.data, cfg.delta, WaveKind::smoothed) {
  cfg_.validate();
  if (cfg_.x_lo == cfg_.x_hi) auto_domain(cfg_);
  if (!(cfg_.x_hi > cfg_.x_lo)) throw domain_error("RunConfig: empty domain");
  if (wave_.sigma > 0.0) {
    double tails = 16.0 * cfg_.delta;
    double lo_need = wave_.w_minus * cfg_.t_end - tails;
    double hi_need = wave_.w_plus * cfg_.t_end + tails;
    double len = cfg_.x_hi - cfg_.x_lo;
    if (lo_need - cfg_.x_lo < 0.1 * len || cfg_.x_hi - hi_need < 0.1 * len)
      throw domain_error("RunConfig: domain too small (fan reaches within 10% of a boundary)");
  }
}

FluidEMState FluidSolver::initialize() const {
  FluidEMState s;
  s.nx = cfg_.nx;
  s.x_lo = cfg_.x_lo;
  s.dx = (cfg_.x_hi - cfg_.x_lo) / cfg_.nx;
  s.time = 0.0;
  s.rho.resize(s.nx);
  s.m1.resize(s.nx);
  s.m2.assign(s.nx, 0.0);
  s.m3.assign(s.nx, 0.0);
  s.etot.resize(s.nx);
  s.n.assign(s.nx, 0.0);
  s.e2.assign(s.nx, 0.0);
  s.e3.assign(s.nx, 0.0);
  s.b2.assign(s.nx, 0.0);
  s.b3.assign(s.nx, 0.0);
  s.e1f.assign(s.nx + 1, 0.0);
  for (int i = 0; i < s.nx; ++i) {
    GasState g = wave_.sigma > 0.0 ? smooth_wave_state(wave_, 0.0, s.x_center(i))
                                   : cfg_.data.left;
    s.rho[i] = g.rho;
    s.m1[i] = g.rho * g.u[0];
    s.etot[i] = g.rho * (g.theta + 0.5 * g.u[0] * g.u[0]);
  }
  if (cfg_.seed.n_amp != 0.0) {
    // dipole bump: zero-mean by construction, then exact discrete neutrality
    for (int i = 0; i < s.nx; ++i) {
      double z = (s.x_center(i) - cfg_.seed.center) / cfg_.seed.width;
      s.n[i] = -2.0 * cfg_.seed.n_amp * z * std::exp(-z * z);
    }
    double mean = 0.0;
    for (double v : s.n) mean += v;
    mean /= s.nx;
    for (double& v : s.n) v -= mean;
    // Gauss-law-compatible E1 on faces
    double acc = 0.0;
    s.e1f[0] = 0.0;
    for (int i = 0; i < s.nx; ++i) {
      acc += s.n[i] * s.dx;
      s.e1f[i + 1] = acc;
    }
  }
  if (cfg_.seed.em_amp != 0.0) {
    for (int i = 0; i < s.nx; ++i) {
      double z = (s.x_center(i) - cfg_.seed.center) / cfg_.seed.width;
      double pulse = cfg_.seed.em_amp * std::exp(-z * z);
      s.e2[i] = pulse;
      s.b3[i] = pulse;
    }
  }
  return s;
}

namespace {

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return (std::abs(a) < std::abs(b)) ? a : b;
}

struct Prim {
  double rho, u1, u2, u3, th, n, e2, e3, b2, b3;
};

}  // namespace

void FluidSolver::check_positive(const FluidEMState& s) const {
  for (int i = 0; i < s.nx; ++i) {
    if (!(s.rho[i] > 0.0) || !std::isfinite(s.rho[i]))
      throw vacuum_error("vacuum: rho <= 0 at x=" + std::to_string(s.x_center(i)) +
                         " t=" + std::to_string(s.time));
    if (!(s.theta(i) > 0.0) || !std::isfinite(s.theta(i)))
      throw vacuum_error("vacuum: theta <= 0 at x=" + std::to_string(s.x_center(i)) +
                         " t=" + std::to_string(s.time));
  }
}

FluidTendencies FluidSolver::rhs(const FluidEMState& s) const {
  return rhs_impl(s, cfg_.em_coupling);
}

FluidTendencies FluidSolver::rhs_impl(const FluidEMState& s, bool em) const {
  const int nx = s.nx;
  const double dx = s.dx;
  const double eps = cfg_.eps;

  // primitives with two far-field ghost layers each side
  std::vector<Prim> w(nx + 4);
  auto fill = [&](int k, const GasState& g) {
    w[k] = Prim{g.rho, g.u[0], 0.0, 0.0, g.theta, 0.0, 0.0, 0.0, 0.0, 0.0};
  };
  fill(0, cfg_.data.left);
  fill(1, cfg_.data.left);
  fill(nx + 2, cfg_.data.right);
  fill(nx + 3, cfg_.data.right);
  for (int i = 0; i < nx; ++i) {
    Prim& p = w[i + 2];
    p.rho = s.rho[i];
    p.u1 = s.u1(i);
    p.u2 = s.u2(i);
    p.u3 = s.u3(i);
    p.th = s.theta(i);
    p.n = s.n[i];
    p.e2 = s.e2[i];
    p.e3 = s.e3[i];
    p.b2 = s.b2[i];
    p.b3 = s.b3[i];
  }

  // minmod slopes for the hydro block; the Maxwell rows are linear and
  // smooth, so they take unlimited central slopes (a limiter's branch
  // switching would cut the rows to first order)
  std::vector<Prim> sl(nx + 4);
  auto slope_of = [&](auto getter, bool limited) {
    for (int k = 1; k < nx + 3; ++k) {
      double c = getter(w[k]);
      double l = getter(w[k - 1]);
      double r = getter(w[k + 1]);
      getter(sl[k]) = limited ? minmod(c - l, r - c) : 0.5 * (r - l);
    }
  };
  slope_of([](Prim& p) -> double& { return p.rho; }, true);
  slope_of([](Prim& p) -> double& { return p.u1; }, true);
  slope_of([](Prim& p) -> double& { return p.u2; }, true);
  slope_of([](Prim& p) -> double& { return p.u3; }, true);
  slope_of([](Prim& p) -> double& { return p.th; }, true);
  slope_of([](Prim& p) -> double& { return p.n; }, true);
  slope_of([](Prim& p) -> double& { return p.e2; }, false);
  slope_of([](Prim& p) -> double& { return p.e3; }, false);
  slope_of([](Prim& p) -> double& { return p.b2; }, false);
  slope_of([](Prim& p) -> double& { return p.b3; }, false);

  FluidTendencies out;
  auto zero = [&](std::vector<double>& v) { v.assign(nx, 0.0); };
  zero(out.rho);
  zero(out.m1);
  zero(out.m2);
  zero(out.m3);
  zero(out.etot);
  zero(out.n);
  zero(out.e2);
  zero(out.e3);
  zero(out.b2);
  zero(out.b3);
  out.e1f.assign(nx + 1, 0.0);

  // face loop: hyperbolic LLF + diffusive fluxes; rows:
  // 0 rho, 1 m1, 2 m2, 3 m3, 4 etot, 5 n
  std::vector<std::array<double, 6>> flux(nx + 1);
  std::vector<double> flux_e2(nx + 1), flux_e3(nx + 1), flux_b2(nx + 1),
      flux_b3(nx + 1);
  for (int f = 0; f <= nx; ++f) {
    int kl = f + 1, kr = f + 2;  // cells left/right of face in ghosted index
    Prim L, R;
    auto rec = [&](auto get) {
      get(L) = get(w[kl]) + 0.5 * get(sl[kl]);
      get(R) = get(w[kr]) - 0.5 * get(sl[kr]);
    };
    rec([](Prim& p) -> double& { return p.rho; });
    rec([](Prim& p) -> double& { return p.u1; });
    rec([](Prim& p) -> double& { return p.u2; });
    rec([](Prim& p) -> double& { return p.u3; });
    rec([](Prim& p) -> double& { return p.th; });
    rec([](Prim& p) -> double& { return p.n; });
    rec([](Prim& p) -> double& { return p.e2; });
    rec([](Prim& p) -> double& { return p.e3; });
    rec([](Prim& p) -> double& { return p.b2; });
    rec([](Prim& p) -> double& { return p.b3; });
    if (L.rho <= 0.0 || L.th <= 0.0 || R.rho <= 0.0 || R.th <= 0.0)
      throw vacuum_error("vacuum: reconstruction left the positive cone at t=" +
                         std::to_string(s.time));

    auto hydro_flux = [](const Prim& p, std::array<double, 6>& F, double& alpha) {
      double pr = kGasR * p.rho * p.th;
      double uu = p.u1 * p.u1 + p.u2 * p.u2 + p.u3 * p.u3;
      double et = p.rho * (p.th + 0.5 * uu);
      F[0] = p.rho * p.u1;
      F[1] = p.rho * p.u1 * p.u1 + pr;
      F[2] = p.rho * p.u1 * p.u2;
      F[3] = p.rho * p.u1 * p.u3;
      F[4] = p.u1 * (et + pr);
      F[5] = p.n * p.u1;
      alpha = std::abs(p.u1) + std::sqrt(10.0 / 9.0 * p.th);
    };
    std::array<double, 6> FL, FR;
    double aL, aR;
    hydro_flux(L, FL, aL);
    hydro_flux(R, FR, aR);
    double alpha = std::max(aL, aR);
    auto cons = [](const Prim& p, std::array<double, 6>& U) {
      double uu = p.u1 * p.u1 + p.u2 * p.u2 + p.u3 * p.u3;
      U[0] = p.rho;
      U[1] = p.rho * p.u1;
      U[2] = p.rho * p.u2;
      U[3] = p.rho * p.u3;
      U[4] = p.rho * (p.th + 0.5 * uu);
      U[5] = p.n;
    };
    std::array<double, 6> UL, UR;
    cons(L, UL);
    cons(R, UR);
    for (int r = 0; r < 6; ++r)
      flux[f][r] = 0.5 * (FL[r] + FR[r]) - 0.5 * alpha * (UR[r] - UL[r]);

    // viscous fluxes (2nd-order central differences across the face)
    const Prim& cl = w[kl];
    const Prim& cr = w[kr];
    double thf = 0.5 * (cl.th + cr.th);
    double k1 = table_->kappa1(thf), k2 = table_->kappa2(thf);
    double du1 = (cr.u1 - cl.u1) / dx;
    double du2 = (cr.u2 - cl.u2) / dx;
    double du3 = (cr.u3 - cl.u3) / dx;
    double dth = (cr.th - cl.th) / dx;
    double u1f = 0.5 * (cl.u1 + cr.u1);
    double u2f = 0.5 * (cl.u2 + cr.u2);
    double u3f = 0.5 * (cl.u3 + cr.u3);
    flux[f][1] -= eps * (4.0 / 3.0) * k1 * du1;
    flux[f][2] -= eps * k1 * du2;
    flux[f][3] -= eps * k1 * du3;
    flux[f][4] -= eps * (k2 * dth + (4.0 / 3.0) * k1 * u1f * du1 +
                         k1 * (u2f * du2 + u3f * du3));

    if (em) {
      // Maxwell rows, LLF with unit wave speed:
      //   dt E2 = -dx B3 (+src), dt E3 = +dx B2, dt B2 = +dx E3, dt B3 = -dx E2
      flux_e2[f] = 0.5 * (L.b3 + R.b3) - 0.5 * (R.e2 - L.e2);
      flux_e3[f] = 0.5 * (-L.b2 - R.b2) - 0.5 * (R.e3 - L.e3);
      flux_b2[f] = 0.5 * (-L.e3 - R.e3) - 0.5 * (R.b2 - L.b2);
      flux_b3[f] = 0.5 * (L.e2 + R.e2) - 0.5 * (R.b3 - L.b3);

      // charge-diffusion and drag pieces of the n-flux; the E1 face update
      // must use the identical total flux so the Gauss law is preserved
      if (cfg_.sigma_drag) {
        double sg = table_->sigma(thf);
        double dnr = (cr.n / cr.rho - cl.n / cl.rho) / dx;
        double e1 = s.e1f[f];
        double uxb1 = u2f * 0.5 * (cl.b3 + cr.b3) - u3f * 0.5 * (cl.b2 + cr.b2);
        flux[f][5] += -eps * sg * dnr + eps * sg * (e1 + uxb1) / (kGasR * thf);
      }
    }
    out.e1f[f] = -flux[f][5];
  }

  for (int r = 0; r < 6; ++r) {
    out.flux_left[r] = flux[0][r];
    out.flux_right[r] = flux[nx][r];
  }

  for (int i = 0; i < nx; ++i) {
    out.rho[i] = -(flux[i + 1][0] - flux[i][0]) / dx;
    out.m1[i] = -(flux[i + 1][1] - flux[i][1]) / dx;
    out.m2[i] = -(flux[i + 1][2] - flux[i][2]) / dx;
    out.m3[i] = -(flux[i + 1][3] - flux[i][3]) / dx;
    out.etot[i] = -(flux[i + 1][4] - flux[i][4]) / dx;
    out.n[i] = -(flux[i + 1][5] - flux[i][5]) / dx;
    if (em) {
      out.e2[i] = -(flux_e2[i + 1] - flux_e2[i]) / dx;
      out.e3[i] = -(flux_e3[i + 1] - flux_e3[i]) / dx;
      out.b2[i] = -(flux_b2[i + 1] - flux_b2[i]) / dx;
      out.b3[i] = -(flux_b3[i + 1] - flux_b3[i]) / dx;
    }
  }

  if (em) {
    for (int i = 0; i < nx; ++i) {
      const Prim& p = w[i + 2];
      double e1 = s.e1_center(i);
      // u x B with B = (0, b2, b3)
      double uxb1 = p.u2 * p.b3 - p.u3 * p.b2;
      double uxb2 = -p.u1 * p.b3;
      double uxb3 = p.u1 * p.b2;
      double f1 = e1 + uxb1, f2 = p.e2 + uxb2, f3 = p.e3 + uxb3;

      // Lorentz force on the momentum and its work on the energy
      out.m1[i] += p.n * f1;
      out.m2[i] += p.n * f2;
      out.m3[i] += p.n * f3;
      out.etot[i] += p.n * (p.u1 * e1 + p.u2 * p.e2 + p.u3 * p.e3);

      // current sources of the Maxwell rows
      out.e2[i] += -p.n * p.u2;
      out.e3[i] += -p.n * p.u3;

      if (cfg_.sigma_drag) {
        double sg = table_->sigma(p.th);
        double pref = eps * sg / (kGasR * p.th);
        // (f x B)_i with B = (0, b2, b3)
        double fxb1 = f2 * p.b3 - f3 * p.b2;
        double fxb2 = f3 * 0.0 - f1 * p.b3;
        double fxb3 = f1 * p.b2 - f2 * 0.0;
        out.m1[i] += pref * fxb1;
        out.m2[i] += pref * fxb2;
        out.m3[i] += pref * fxb3;
        out.etot[i] += pref * (f1 * e1 + f2 * p.e2 + f3 * p.e3);

        double dnr = (w[i + 3].n / w[i + 3].rho - w[i + 1].n / w[i + 1].rho) / (2.0 * dx);
        // e1 x B = (0, -b3, b2)
        out.m2[i] += eps * sg * dnr * p.b3;
        out.m3[i] += -eps * sg * dnr * p.b2;
        out.etot[i] += -eps * sg * dnr * e1;

        out.e2[i] += -eps * sg * f2 / (kGasR * p.th);
        out.e3[i] += -eps * sg * f3 / (kGasR * p.th);
      }
    }
  }
  return out;
}

FluidTendencies FluidSolver::rhs_pure_ns(const FluidEMState& s) const {
  return rhs_impl(s, false);
}

double FluidSolver::stable_dt(const FluidEMState& s) const {
  double amax = 1e-30;
  double numax = 1e-30;
  for (int i = 0; i < s.nx; ++i) {
    double th = s.theta(i);
    double a = std::abs(s.u1(i)) + std::sqrt(10.0 / 9.0 * th);
    if (cfg_.em_coupling) a = std::max(a, 1.0);
    amax = std::max(amax, a);
    double nu = cfg_.eps *
                std::max({4.0 / 3.0 * table_->kappa1(th), table_->kappa2(th),
                          cfg_.sigma_drag ? table_->sigma(th) : 0.0}) /
                s.rho[i];
    numax = std::max(numax, nu);
  }
  return cfg_.cfl * std::min(s.dx / amax, 0.5 * s.dx * s.dx / numax);
}

void FluidSolver::step(FluidEMState& s, double dt) const {
  if (dt > 1.0000001 * stable_dt(s))
    throw solver_error("step: dt exceeds the stability limit");
  auto euler = [&](const FluidEMState& from, const FluidTendencies& k, double w,
                   const FluidEMState& base, double wb, FluidEMState& to) {
    to = base;
    for (int i = 0; i < from.nx; ++i) {
      to.rho[i] = wb * base.rho[i] + w * (from.rho[i] + dt * k.rho[i]);
      to.m1[i] = wb * base.m1[i] + w * (from.m1[i] + dt * k.m1[i]);
      to.m2[i] = wb * base.m2[i] + w * (from.m2[i] + dt * k.m2[i]);
      to.m3[i] = wb * base.m3[i] + w * (from.m3[i] + dt * k.m3[i]);
      to.etot[i] = wb * base.etot[i] + w * (from.etot[i] + dt * k.etot[i]);
      to.n[i] = wb * base.n[i] + w * (from.n[i] + dt * k.n[i]);
      to.e2[i] = wb * base.e2[i] + w * (from.e2[i] + dt * k.e2[i]);
      to.e3[i] = wb * base.e3[i] + w * (from.e3[i] + dt * k.e3[i]);
      to.b2[i] = wb * base.b2[i] + w * (from.b2[i] + dt * k.b2[i]);
      to.b3[i] = wb * base.b3[i] + w * (from.b3[i] + dt * k.b3[i]);
    }
    for (int f = 0; f <= from.nx; ++f)
      to.e1f[f] = wb * base.e1f[f] + w * (from.e1f[f] + dt * k.e1f[f]);
  };

  FluidTendencies k1 = rhs(s);
  FluidEMState s1;
  euler(s, k1, 1.0, s, 0.0, s1);
  s1.time = s.time + dt;
  check_positive(s1);
  FluidTendencies k2 = rhs(s1);
  FluidEMState s2;
  euler(s1, k2, 0.5, s, 0.5, s2);
  s2.time = s.time + dt;
  check_positive(s2);
  s = std::move(s2);
}

FluidSolver::History FluidSolver::run() const {
  History h;
  h.config = cfg_;
  FluidEMState s = initialize();
  h.snapshots.push_back(s);
  double t_snap = cfg_.t_end / (cfg_.snapshots - 1);
  for (int k = 1; k < cfg_.snapshots; ++k) {
    double target = k * t_snap;
    while (s.time < target - 1e-14) {
      double dt = std::min(stable_dt(s), target - s.time);
      step(s, dt);
    }
    s.time = target;  // clamp accumulated roundoff
    h.snapshots.push_back(s);
  }
  return h;
}

double FluidSolver::gauss_residual(const FluidEMState& s) {
  double worst = 0.0;
  for (int i = 0; i < s.nx; ++i)
    worst = std::max(worst, std::abs((s.e1f[i + 1] - s.e1f[i]) / s.dx - s.n[i]));
  return worst;
}

}  // namespace vml
