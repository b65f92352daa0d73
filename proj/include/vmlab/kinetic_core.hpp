#ifndef VMLAB_KINETIC_CORE_HPP
#define VMLAB_KINETIC_CORE_HPP

#include <array>
#include <optional>

#include "vmlab/velocity_grid.hpp"

namespace vml {

/// Local Maxwellian M_[rho,u,theta] sampled on the grid.
KineticField maxwellian(const GasState& s, const VelocityGrid& g);

/// Global reference Maxwellian mu = M_[1,0,3/2].
KineticField global_maxwellian(const VelocityGrid& g);

struct Moments {
  double rho;
  Vec3 momentum;
  double energy;  // rho (e + |u|^2/2)
  GasState recovered() const;
};

/// Midpoint-quadrature moments against the five collision invariants.
Moments moments(const KineticField& f);

/// The five orthonormal basis fields chi_i M-orthonormalized by Gram-Schmidt
/// in the <.,.>_M quadrature inner product.
class HydroBasis {
 public:
  HydroBasis(const GasState& state, const VelocityGrid& g);

  const KineticField& maxwell() const { return M_; }
  const KineticField& chi(int i) const { return chi_[i]; }
  /// Raw (pre-orthonormalization) quadrature Gram matrix of the analytic chi.
  const std::array<std::array<double, 5>, 5>& raw_gram() const { return raw_gram_; }

  /// <f, g>_M = sum f g / M h^3.
  double inner_m(const KineticField& f, const KineticField& g) const;

  KineticField project_hydro(const KineticField& f) const;    // P0 f
  KineticField project_micro(const KineticField& f) const;    // P1 f = f - P0 f
  KineticField project_charge(const KineticField& f) const;   // Pd f
  KineticField project_charge_rest(const KineticField& f) const;  // Pr f

  const GasState& state() const { return state_; }
  const VelocityGrid& grid() const { return *grid_; }

 private:
  GasState state_;
  const VelocityGrid* grid_;
  KineticField M_;
  KineticField inv_M_;  // 1/M, cached
  std::array<KineticField, 5> chi_;
  std::array<std::array<double, 5>, 5> raw_gram_;
};

struct WeightSpec {
  int l = 2;
  double q1 = 0.5;
  double q2 = 0.25;
  int alpha_order = 0;
  int beta_order = 0;

  void validate() const;
};

/// Velocity weight omega(alpha,beta)(t,v) =
///   <v>^{2(l-|a|-|b|)} exp(q(t) <v>^2 / 2), q(t) = q2/(1+t)^{q1}.
double weight_omega(const WeightSpec& w, double t, const Vec3& v);

/// Quadrature of omega^2 mu^{-1} M^{2(1-eps0)}; finite when
/// q2 < 1/(R theta) - 1/2 - eps0/(R theta).
double weight_integrability(const WeightSpec& w, double t, const GasState& s,
                            const VelocityGrid& g, double eps0);

/// Central differences in v (2nd order; one-sided 3-point at the boundary,
/// exact on quadratics).
KineticField velocity_derivative(const KineticField& f, int axis);

/// Exact negative transpose of velocity_derivative (discrete divergence).
KineticField velocity_derivative_transpose(const KineticField& f, int axis);

/// CSV / binary dumps, v1-fastest order.
void write_field_csv(const KineticField& f, const std::string& path);
void write_field_binary(const KineticField& f, const std::string& path);

}  // namespace vml

#endif
