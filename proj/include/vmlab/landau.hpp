#ifndef VMLAB_LANDAU_HPP
#define VMLAB_LANDAU_HPP

#include <array>
#include <memory>
#include <optional>

#include "vmlab/fft3.hpp"
#include "vmlab/kinetic_core.hpp"

namespace vml {

struct CollisionParams {
  double gamma = -3.0;  // in [-3, -2); -3 is the Coulomb case

  void validate() const {
    if (!(gamma >= -3.0 && gamma < -2.0))
      throw domain_error("CollisionParams: gamma must be in [-3, -2)");
  }
};

/// Convolution engine for the Landau kernel phi_ij on a fixed grid:
/// caches the padded FFT plan, the six kernel spectra (symmetric 3x3,
/// order 11,22,33,12,13,23), and the global-Maxwellian helpers used by the
/// mu-relative derivatives. The singular node of the kernel (w = 0) carries
/// zero weight.
class LandauEngine {
 public:
  LandauEngine(const VelocityGrid& g, const CollisionParams& p);

  const VelocityGrid& grid() const { return *grid_; }
  const CollisionParams& params() const { return params_; }
  const KineticField& mu() const { return mu_; }

  /// phi_ij * f for all six components (order 11,22,33,12,13,23).
  std::array<KineticField, 6> conv_phi(const KineticField& f) const;

  /// B_j = sum_i phi_ji * F_i for a 3-vector input field.
  std::array<KineticField, 3> conv_phi_contract(
      const std::array<KineticField, 3>& F) const;

  /// mu-relative derivative: D~_i f = mu * Dc_i(f/mu) - v_i f
  /// (exact derivative on Maxwellian multiples of mu's quadratic log).
  std::array<KineticField, 3> mu_relative_gradient(const KineticField& f) const;

  /// Direct-summation convolution oracle (O(N^2); tests and tiny grids).
  std::array<KineticField, 6> conv_phi_direct(const KineticField& f) const;

  /// Diagonal kernel weight carried by the singular cell: the exact integral
  /// of phi over the table's support cube minus the off-center midpoint sum,
  /// divided by h^3 (singularity-subtraction correction).
  double singular_cell_diagonal() const;

  static std::shared_ptr<const LandauEngine> shared(const VelocityGrid& g,
                                                    const CollisionParams& p);

 private:
  std::vector<cplx> forward_padded(const KineticField& f) const;
  KineticField extract(const std::vector<cplx>& spec) const;

  const VelocityGrid* grid_;
  VelocityGrid grid_store_;
  CollisionParams params_;
  std::size_t np_ = 0;
  std::unique_ptr<Fft3> fft_;
  std::array<std::vector<cplx>, 6> kernel_hat_;
  double singular_diag_[3] = {0.0, 0.0, 0.0};
  KineticField mu_, inv_mu_;
};

/// Bilinear Landau operator Q(G1, G2) in conservative weak form: the
/// discrete mass of the output telescopes to zero exactly; Q(mu, mu)
/// vanishes to FFT roundoff.
KineticField collide(const KineticField& G1, const KineticField& G2,
                     const LandauEngine& eng);

/// Landau collision frequency sigma_ij = phi_ij * mu (order 11,22,33,12,13,23).
std::array<KineticField, 6> sigma_matrix(const LandauEngine& eng);

/// Smallest eigenvalue of the 3x3 sigma matrix over all nodes.
double sigma_min_eigenvalue(const std::array<KineticField, 6>& sig);

/// |f|_sigma^2 = sum_ij int [sigma_ij d_i f d_j f + sigma_ij v_i v_j/4 f^2] dv,
/// optionally with the omega^2(alpha,beta)(t,v) weight in the integrand.
double sigma_norm_sq(const KineticField& f, const std::array<KineticField, 6>& sig,
                     const std::optional<WeightSpec>& w = std::nullopt,
                     double t = 0.0);

/// Gamma(h1, h2) = mu^{-1/2} Q(mu^{1/2} h1, mu^{1/2} h2), with the Gaussian
/// tail guard (nodes with sqrt(mu) < 1e-150 are zeroed).
KineticField gamma_bilinear(const KineticField& h1, const KineticField& h2,
                            const LandauEngine& eng);

}  // namespace vml

#endif
