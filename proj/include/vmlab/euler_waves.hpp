#ifndef VMLAB_EULER_WAVES_HPP
#define VMLAB_EULER_WAVES_HPP

#include <string>

#include "vmlab/gas_state.hpp"

namespace vml {

struct CharFields {
  double p;        // pressure
  double S;        // entropy
  double lambda1;  // u1 - sqrt(p_rho)
  double lambda2;  // u1
  double lambda3;  // u1 + sqrt(p_rho)
};

/// Pressure, entropy and the three characteristic speeds of the 1D Euler
/// system; p_rho = (5/3) k rho^{2/3} e^S.
CharFields characteristic_fields(const GasState& s);

struct RiemannInvariant3 {
  double r31;  // u1 - sqrt(15 k) rho^{1/3} e^{S/2}
  double r32;  // S
};

/// The two 3-Riemann invariants.
RiemannInvariant3 riemann_invariant_3(const GasState& s);

struct RiemannReport {
  double w_minus = 0.0;      // lambda3(left)
  double w_plus = 0.0;       // lambda3(right)
  double sigma = 0.0;        // wave strength |drho| + |du| + |dtheta|
  double r31_gap = 0.0;      // |R31(left) - R31(right)|
  double entropy_gap = 0.0;  // |S(left) - S(right)|
  bool pass = false;
  std::string message;
};

/// Report-only validation that (left, right) is a genuine 3-rarefaction pair.
RiemannReport validate_riemann_data(const RiemannData& d);

/// Exact self-similar 3-rarefaction fan evaluated at xi = x/t.
/// Requires w_minus < w_plus; lambda3 of the returned state equals xi inside
/// the fan to the solver tolerance (1e-12 on the residual).
GasState exact_fan_3(const RiemannData& d, double xi);

/// State on the 3-rarefaction curve through `left` at density rho.
GasState curve_state_3(const GasState& left, double rho);

/// Construct Riemann data of prescribed wave strength sigma by moving the
/// right state up the 3-curve from `left` (bisection on rho_plus).
RiemannData make_rarefaction_data(const GasState& left, double sigma_target);

}  // namespace vml

#endif
