#ifndef VMLAB_VELOCITY_GRID_HPP
#define VMLAB_VELOCITY_GRID_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "vmlab/gas_state.hpp"

namespace vml {

/// Truncated uniform velocity lattice on [-v_max, v_max]^3, odd node count
/// per axis so the origin is a node. Node order is v1-fastest.
class VelocityGrid {
 public:
  VelocityGrid(int n_per_axis, double v_max);

  int n() const { return n_; }
  double v_max() const { return v_max_; }
  double h() const { return h_; }
  double cell_volume() const { return h_ * h_ * h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  double coord(int i) const { return -v_max_ + h_ * i; }
  std::size_t index(int i1, int i2, int i3) const {
    return static_cast<std::size_t>(i1) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(i2) +
                                           static_cast<std::size_t>(n_) * i3);
  }
  Vec3 node(std::size_t idx) const {
    int i1 = static_cast<int>(idx % n_);
    int i2 = static_cast<int>((idx / n_) % n_);
    int i3 = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
    return {coord(i1), coord(i2), coord(i3)};
  }

  bool operator==(const VelocityGrid& o) const {
    return n_ == o.n_ && v_max_ == o.v_max_;
  }

  /// v_max rule: |u| + 8 sqrt(R theta_max).
  static double default_v_max(double u_abs, double theta_max) {
    return u_abs + 8.0 * std::sqrt(kGasR * theta_max);
  }

  /// Truncation balanced against lattice resolution: coarse grids cap the
  /// radius so the Maxwellian quadrature stays inside the Gram guard.
  static double balanced_v_max(int n, double u_abs, double theta_max) {
    double thermal = std::min(8.0, 1.05 * 0.5 * (n - 1));
    return u_abs + thermal * std::sqrt(kGasR * theta_max);
  }

 private:
  int n_;
  double v_max_;
  double h_;
};

/// Scalar field sampled on a VelocityGrid (v1-fastest ordering).
struct KineticField {
  const VelocityGrid* grid = nullptr;
  std::vector<double> values;

  KineticField() = default;
  explicit KineticField(const VelocityGrid& g) : grid(&g), values(g.size(), 0.0) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

void require_same_grid(const KineticField& a, const KineticField& b);

double field_l2(const KineticField& f);              // sqrt(sum f^2 h^3)
double field_dot(const KineticField& a, const KineticField& b);  // sum a b h^3

}  // namespace vml

#endif
