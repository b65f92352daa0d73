#ifndef VMLAB_FLUID_HPP
#define VMLAB_FLUID_HPP

#include <functional>
#include <memory>
#include <vector>

#include "vmlab/burgers.hpp"
#include "vmlab/burnett.hpp"

namespace vml {

struct vacuum_error : solver_error {
  using solver_error::solver_error;
};

/// theta -> (kappa1, kappa2, sigma) closure; either a monotone-cubic table
/// built from transport_coefficients knots or a constant-coefficient mode.
class TransportTable {
 public:
  /// Table mode: knots at `theta_knots`, each solved at grid size n_knot.
  static TransportTable build(const CollisionParams& p, std::vector<double> theta_knots,
                              int n_knot, const CgOptions& opt = {});
  /// Constant mode (values frozen at theta0).
  static TransportTable constant(double kappa1, double kappa2, double sigma);

  double kappa1(double theta) const { return eval(k1_, theta); }
  double kappa2(double theta) const { return eval(k2_, theta); }
  double sigma(double theta) const { return eval(sg_, theta); }

  bool is_constant() const { return knots_.empty(); }
  const std::vector<double>& knots() const { return knots_; }

 private:
  struct Spline {
    std::vector<double> y, slope;  // Fritsch-Carlson monotone cubic
  };
  double eval(const Spline& s, double theta) const;
  static Spline make_spline(const std::vector<double>& x, const std::vector<double>& y);

  std::vector<double> knots_;
  Spline k1_, k2_, sg_;
  double c1_ = 0.0, c2_ = 0.0, cs_ = 0.0;
};

struct SeedPerturbation {
  double n_amp = 0.0;   // amplitude of the charge seed (dipole bump, zero mean)
  double em_amp = 0.0;  // amplitude of an (E2, B3) pulse
  double center = 0.0;
  double width = 1.0;
};

struct RunConfig {
  double eps = 1e-2;
  double a = 0.5;  // scaling exponent, must be in (1/3, 1)
  double delta = 0.2;
  RiemannData data;
  int nx = 800;
  double x_lo = 0.0, x_hi = 0.0;  // equal => auto-size the domain
  double cfl = 0.4;
  double t_end = 1.0;
  int snapshots = 9;
  CollisionParams collision;
  bool em_coupling = true;   // n, E, B evolve and couple into the fluid
  bool sigma_drag = true;    // the eps*sigma(theta) Lorentz-drag terms
  SeedPerturbation seed;

  void validate() const;
};

struct FluidEMState {
  int nx = 0;
  double dx = 0.0, x_lo = 0.0;
  double time = 0.0;
  std::vector<double> rho, m1, m2, m3, etot, n;  // cell-centered
  std::vector<double> e2, e3, b2, b3;            // cell-centered
  std::vector<double> e1f;                       // faces, size nx+1

  double x_center(int i) const { return x_lo + (i + 0.5) * dx; }
  double e1_center(int i) const { return 0.5 * (e1f[i] + e1f[i + 1]); }
  double u1(int i) const { return m1[i] / rho[i]; }
  double u2(int i) const { return m2[i] / rho[i]; }
  double u3(int i) const { return m3[i] / rho[i]; }
  double theta(int i) const {
    double uu = (m1[i] * m1[i] + m2[i] * m2[i] + m3[i] * m3[i]) / (rho[i] * rho[i]);
    return etot[i] / rho[i] - 0.5 * uu;
  }
};

struct FluidTendencies {
  std::vector<double> rho, m1, m2, m3, etot, n;
  std::vector<double> e2, e3, b2, b3;
  std::vector<double> e1f;  // face tendencies (= minus the total n-flux)
  // boundary fluxes of the conserved rows, for budget audits
  double flux_left[6] = {0, 0, 0, 0, 0, 0};
  double flux_right[6] = {0, 0, 0, 0, 0, 0};
};

class FluidSolver {
 public:
  FluidSolver(const RunConfig& cfg, std::shared_ptr<const TransportTable> table);

  FluidEMState initialize() const;
  FluidTendencies rhs(const FluidEMState& s) const;
  /// Pure Navier-Stokes tendencies (no EM code path at all).
  FluidTendencies rhs_pure_ns(const FluidEMState& s) const;

  double stable_dt(const FluidEMState& s) const;
  void step(FluidEMState& s, double dt) const;

  struct History {
    RunConfig config;
    std::vector<FluidEMState> snapshots;
  };
  History run() const;

  const RunConfig& config() const { return cfg_; }
  const WaveProfile& wave() const { return wave_; }

  static double gauss_residual(const FluidEMState& s);

 private:
  FluidTendencies rhs_impl(const FluidEMState& s, bool em) const;
  void check_positive(const FluidEMState& s) const;

  RunConfig cfg_;
  std::shared_ptr<const TransportTable> table_;
  WaveProfile wave_;
};

/// Auto-sized domain for a config (fan extent + smoothing tails + margin).
void auto_domain(RunConfig& cfg);

}  // namespace vml

#endif
