#ifndef VMLAB_GAS_STATE_HPP
#define VMLAB_GAS_STATE_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vml {

/// Gas constant of the monatomic model, fixed exactly.
inline constexpr double kGasR = 2.0 / 3.0;

/// State-equation constant k = 1/(2*pi*e).
inline const double kStateK = 1.0 / (2.0 * 3.14159265358979323846264338327950288 *
                                     2.71828182845904523536028747135266250);

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Primitive hydrodynamic state (rho, u, theta); rho > 0, theta > 0.
struct GasState {
  double rho = 1.0;
  Vec3 u{0.0, 0.0, 0.0};
  double theta = 1.5;

  GasState() = default;
  GasState(double rho_, const Vec3& u_, double theta_) : rho(rho_), u(u_), theta(theta_) {
    validate();
  }
  GasState(double rho_, double u1, double theta_)
      : rho(rho_), u{u1, 0.0, 0.0}, theta(theta_) {
    validate();
  }

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw domain_error("GasState: rho must be > 0");
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw domain_error("GasState: theta must be > 0");
  }

  double pressure() const { return kGasR * rho * theta; }
  /// Macroscopic entropy S = -(2/3) ln rho + ln((4/3) pi theta) + 1.
  double entropy() const {
    return -(2.0 / 3.0) * std::log(rho) +
           std::log((4.0 / 3.0) * 3.14159265358979323846264338327950288 * theta) + 1.0;
  }
};

/// Riemann data for the 3-rarefaction problem: both states share S and have
/// zero transverse velocity.
struct RiemannData {
  GasState left;
  GasState right;
};

}  // namespace vml

#endif
