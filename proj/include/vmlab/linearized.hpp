#ifndef VMLAB_LINEARIZED_HPP
#define VMLAB_LINEARIZED_HPP

#include <functional>
#include <memory>

#include "vmlab/landau.hpp"

namespace vml {

/// Linearized Landau operators at a local Maxwellian M, discretized through
/// the symmetric weak form
///   <L_M g, psi>_M = -1/2 sum_{v,u} phi(v-u) M(v) M(u)
///                    [D(g/M)(v) - D(g/M)(u)] . [D(psi/M)(v) - D(psi/M)(u)] h^6,
/// which is self-adjoint in <.,.>_M, negative semidefinite, annihilates the
/// five collision invariants exactly, and conserves their moments exactly.
/// The charge operator LL_M g = Q(g, M) uses the analogous reduced form.
class LinearizedOperator {
 public:
  LinearizedOperator(const GasState& state, const VelocityGrid& g,
                     const CollisionParams& p);

  const HydroBasis& basis() const { return *basis_; }
  const LandauEngine& engine() const { return *engine_; }
  const GasState& state() const { return state_; }
  const VelocityGrid& grid() const { return basis_->grid(); }

  /// L_M g = Q(g, M) + Q(M, g).
  KineticField apply_full(const KineticField& g) const;
  /// LL_M g = Q(g, M).
  KineticField apply_charge(const KineticField& g) const;

  /// Jacobi diagonal estimate of -L_M in the <.,.>_M pairing.
  const KineticField& jacobi_diagonal() const { return jacobi_; }

  /// Checkerboard deflation fields: central differences annihilate the
  /// seven alternating-parity modes (-1)^{eps . i} M in the interior, so
  /// they are near-null for the discrete operator and must be projected
  /// out of Krylov solves. Orthonormalized in <.,.>_M against the chi basis.
  const std::vector<KineticField>& checkerboard_modes() const { return checker_; }

  /// Remove chi-span and checkerboard components (the solver's deflation).
  KineticField deflate_full(const KineticField& f) const;
  KineticField deflate_charge(const KineticField& f) const;

 private:
  GasState state_;
  std::shared_ptr<const LandauEngine> engine_;
  std::unique_ptr<HydroBasis> basis_;
  KineticField inv_M_;
  std::array<KineticField, 6> sigM_;  // phi_ij * M
  KineticField jacobi_;
  std::vector<KineticField> checker_;
};

struct CgOptions {
  double tol = 1e-9;
  int max_iter = 5000;
  bool precondition = true;
};

struct CgResult {
  KineticField x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Deflated preconditioned CG on -L_M in the <.,.>_M inner product.
/// `project` must be the orthogonal projector onto the operator's range
/// (P1 for L_M, Pr for LL_M); every iterate is re-projected.
/// Throws solver_error("rhs not in range ...") if project(rhs) != rhs to
/// 1e-8 relative, and on non-convergence.
CgResult invert_negative(const LinearizedOperator& op,
                         const KineticField& rhs, bool charge_operator,
                         const CgOptions& opt = {});

/// invert_LM per the macro-micro contract: solves L_M X = rhs with P0 X = 0.
KineticField invert_LM(const KineticField& rhs, const LinearizedOperator& op,
                       const CgOptions& opt = {});
/// Charge variant: solves LL_M X = rhs with Pd X = 0.
KineticField invert_LLM(const KineticField& rhs, const LinearizedOperator& op,
                        const CgOptions& opt = {});

}  // namespace vml

#endif
