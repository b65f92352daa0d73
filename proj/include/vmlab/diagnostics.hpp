#ifndef VMLAB_DIAGNOSTICS_HPP
#define VMLAB_DIAGNOSTICS_HPP

#include <optional>
#include <vector>

#include "vmlab/fluid.hpp"

namespace vml {

struct PerturbationFields {
  std::vector<double> phi, psi1, psi2, psi3, zeta;
};

/// (phi, psi, zeta) = (rho - rho_bar, u - u_bar, theta - theta_bar) on the
/// solver grid at the state's own time.
PerturbationFields perturbation_fields(const FluidEMState& s, const WaveProfile& wave);

struct EntropyPair {
  std::vector<double> eta;  // >= 0 pointwise
  std::vector<double> q;    // u1 eta + R (phi psi1 theta_bar + rho psi1 zeta)
  double integral_dx = 0.0;
};

/// Relative entropy-entropy flux pair with Phi(s) = s - ln s - 1.
EntropyPair entropy_pair(const FluidEMState& s, const WaveProfile& wave);

enum class WaveReference { smoothed, exact_fan };

struct WaveError {
  double sup_rho = 0.0, sup_u = 0.0, sup_theta = 0.0;  // component sup norms
  double fluid_sup = 0.0;    // max of the three
  double micro_f1 = 0.0;     // || (F1 - M_ref)/sqrt(mu) ||_{Linf_x L2_v}
  double micro_f2 = 0.0;     // || F2/sqrt(mu) ||_{Linf_x L2_v}
  double eb_sup = 0.0;       // ||(E,B)||_{Linf_x}
  double mt_metric_sq = 0.0; // micro_f1^2 + micro_f2^2 + eb_sup^2
};

struct DiagOptions {
  int x_stride = 4;       // column stride for the kinetic quadratures
  int n_diag = 17;        // velocity grid for L2_v norms
  int n_ref = 17;         // reference-profile grid
  bool beta_blocks = false;  // include |beta| >= 1 mixed blocks
  double h_min_fan = 0.05;   // exact-fan reference needs t >= h_min_fan
  WeightSpec weight;      // l, q1, q2 (alpha/beta orders set per block)
};

/// q1 per the smallness recipe, clipped to [1e-6, 0.99].
double q1_recipe(double eps, double a, double delta, double T, double q2);

/// Closure evaluation context: the diagnostics velocity grid, the sigma
/// fields on it, and the normalized Burnett / charge profiles.
class ClosureContext {
 public:
  ClosureContext(const RunConfig& cfg, const DiagOptions& opt, double theta_max,
                 double u_max);

  const VelocityGrid& grid() const { return *grid_; }
  const DiagOptions& options() const { return opt_; }

  struct Column {
    std::vector<double> g1, g2;        // microscopic closure fields /sqrt(mu)
    std::vector<double> f1w, f2w;      // F1/sqrt(mu), F2/sqrt(mu)
  };

  /// Build the closure fields for solver cell i of snapshot k.
  Column build_column(const FluidSolver::History& h, const WaveProfile& wave,
                      int k, int i) const;

  /// L2_v norm of (F1 - M_ref)/sqrt(mu) at a cell against a reference state.
  double micro_err_f1(const FluidEMState& s, int i, const WaveProfile& wave,
                      const GasState& ref) const;
  double micro_err_f2(const FluidEMState& s, int i, const WaveProfile& wave) const;

  double omega_norm_sq(const std::vector<double>& f, const WeightSpec& w, double t,
                       bool with_bracket_v) const;
  double sigma_omega_norm_sq(const std::vector<double>& f, const WeightSpec& w,
                             double t) const;
  std::vector<double> beta_derivative(const std::vector<double>& f, int axis) const;

  const KineticField& mu() const { return mu_; }

 private:
  void profile_at(double u1_bar, double theta_bar, const Vec3& v, double* A1,
                  double* B11, double* B12, double* B13, double* S1, double* S2,
                  double* S3) const;

  DiagOptions opt_;
  CollisionParams params_;
  std::unique_ptr<VelocityGrid> grid_;
  KineticField mu_, sqrt_mu_;
  std::array<KineticField, 6> sigma_;
  std::shared_ptr<const ReferenceProfiles> ref_;
  friend struct ClosureProbe;
};

struct EnergyRow {
  double tau = 0.0, t = 0.0;
  double e_tilde = 0.0;    // instant energy in (t,x) variables
  double e_scaled = 0.0;   // the same functional assembled in (tau,y)
  double dissipation = 0.0;
  double f_omega = 0.0;
  double entropy_integral = 0.0;  // int eta dy
  double gauss_residual = 0.0;
  WaveError err_smoothed;
  std::optional<WaveError> err_fan;
};

struct EnergyReport {
  std::vector<EnergyRow> rows;
};

/// The instant energy / dissipation / weighted functionals along a run
/// history (interior snapshots; time derivatives by centered differences on
/// the snapshot cadence). Microscopic blocks use the first-order closure
/// fields; they are closure diagnostics, not a kinetic solution's energy.
EnergyReport energy_functionals(const FluidSolver::History& h, const DiagOptions& opt);

WaveError wave_error(const FluidEMState& s, const WaveProfile& wave,
                     const ClosureContext& ctx, WaveReference ref);

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;  // ln C
  double r_squared = 0.0;
  bool uninformative = false;
};

/// Least squares on (ln x, ln y); degenerate-data error on bad input.
RateFit rate_fit(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace vml

#endif
