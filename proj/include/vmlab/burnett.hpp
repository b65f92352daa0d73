#ifndef VMLAB_BURNETT_HPP
#define VMLAB_BURNETT_HPP

#include <array>
#include <memory>

#include "vmlab/linearized.hpp"

namespace vml {

/// A_hat_j(v) = ((|v|^2 - 5)/2) v_j,  B_hat_ij(v) = v_i v_j - delta_ij |v|^2/3.
double burnett_A_hat(const Vec3& v, int j);
double burnett_B_hat(const Vec3& v, int i, int j);

/// Burnett functions at a state: A_j = L_M^{-1}[A_hat_j((v-u)/sqrt(R theta)) M],
/// B_ij likewise; each orthogonal to ker L_M.
struct BurnettSet {
  GasState state;
  std::array<KineticField, 3> A;
  std::array<std::array<KineticField, 3>, 3> B;  // symmetric
};

BurnettSet burnett_functions(const LinearizedOperator& op, const CgOptions& opt = {});

/// Single Burnett solves (A_j or B_ij) for callers that need a subset.
KineticField burnett_rhs_A(const LinearizedOperator& op, int j);
KineticField burnett_rhs_B(const LinearizedOperator& op, int i, int j);
KineticField burnett_A(const LinearizedOperator& op, int j, const CgOptions& opt = {});
KineticField burnett_B(const LinearizedOperator& op, int i, int j,
                       const CgOptions& opt = {});

struct TransportCoeffs {
  double kappa1 = 0.0;       // viscosity, > 0
  double kappa2 = 0.0;       // heat conductivity, > 0
  double sigma_theta = 0.0;  // conductivity-like coefficient, > 0
  double theta = 0.0;
  double offdiag_max = 0.0;  // max |int v_i LL^{-1} P_r(v_j M) dv|, i != j
};

/// kappa1 = -R theta int B_hat_12 B_12 dv, kappa2 = -R^2 theta int A_hat_j A_j dv,
/// sigma(theta) from -int v_i LL_M^{-1} P_r(v_j M) dv = delta_ij sigma(theta);
/// evaluated at rho = 1, u = 0 on a grid with v_max = 8 sqrt(R theta).
TransportCoeffs transport_coefficients(double theta, int n_per_axis,
                                       const CollisionParams& p,
                                       const CgOptions& opt = {});

/// First-order correction field carried by the wave gradients:
///   Gbar1 = eps^{1-a} [ (sqrt R/sqrt theta) dtheta A_1 + sum_j du_j B_1j ].
KineticField correction_Gbar(double dtheta_dy, const Vec3& du_dy,
                             const LinearizedOperator& op, double eps, double a,
                             const CgOptions& opt = {});

/// Same field through the direct definition
///   eps^{1-a} (1/R theta) L_M^{-1} P1[v_1 (|v-u|^2/(2 theta) dtheta + v.du) M].
KineticField correction_Gbar_direct(double dtheta_dy, const Vec3& du_dy,
                                    const LinearizedOperator& op, double eps,
                                    double a, const CgOptions& opt = {});

/// Universal normalized profiles at the reference state (1, 0, 3/2) where
/// R theta = 1: A_j, B_1j, and S_j = LL^{-1} P_r(v_j mu). At a state
/// (rho,u,theta): A_j(v) = (R theta)^{-(3+gamma)/2} A_j^ref((v-u)/sqrt(R theta)),
/// S_j(v) = (R theta)^{-(gamma+2)/2} S_j^ref(...); the transport coefficients
/// scale as theta^{1-gamma/2}. Shared per (n, gamma).
struct ReferenceProfiles {
  CollisionParams params;
  VelocityGrid grid;  // v_max = 8, the reference rule at theta = 3/2
  KineticField A1, B11, B12, B13, S1;
  double theta_ref = 1.5;
  double kappa1_ref, kappa2_ref, sigma_ref;
  double power;  // 1 - gamma/2

  double kappa1(double theta) const {
    return kappa1_ref * std::pow(theta / theta_ref, power);
  }
  double kappa2(double theta) const {
    return kappa2_ref * std::pow(theta / theta_ref, power);
  }
  double sigma(double theta) const {
    return sigma_ref * std::pow(theta / theta_ref, power);
  }

  static std::shared_ptr<const ReferenceProfiles> shared(int n, const CollisionParams& p);

  ReferenceProfiles(int n, const CollisionParams& p);
};

/// Axis permutation of a field on the symmetric lattice (exact relabeling).
KineticField permute_axes(const KineticField& f, int p1, int p2, int p3);

}  // namespace vml

#endif
