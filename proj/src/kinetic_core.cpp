#include "vmlab/kinetic_core.hpp"

#include <cmath>
#include <fstream>

namespace vml {

VelocityGrid::VelocityGrid(int n_per_axis, double v_max)
    : n_(n_per_axis), v_max_(v_max) {
  if (n_ < 9 || n_ % 2 == 0)
    throw domain_error("VelocityGrid: n_per_axis must be odd and >= 9");
  if (!(v_max > 0.0)) throw domain_error("VelocityGrid: v_max must be > 0");
  h_ = 2.0 * v_max_ / (n_ - 1);
}

void require_same_grid(const KineticField& a, const KineticField& b) {
  if (!a.grid || !b.grid || !(*a.grid == *b.grid))
    throw domain_error("kinetic fields live on different grids");
}

double field_l2(const KineticField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid->cell_volume());
}

double field_dot(const KineticField& a, const KineticField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid->cell_volume();
}

KineticField maxwellian(const GasState& s, const VelocityGrid& g) {
  s.validate();
  KineticField f(g);
  double pref = s.rho / std::pow(2.0 * 3.14159265358979323846264338327950288 *
                                     kGasR * s.theta,
                                 1.5);
  double inv2rt = 1.0 / (2.0 * kGasR * s.theta);
  int n = g.n();
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3) {
    double d3 = g.coord(i3) - s.u[2];
    for (int i2 = 0; i2 < n; ++i2) {
      double d2 = g.coord(i2) - s.u[1];
      for (int i1 = 0; i1 < n; ++i1, ++idx) {
        double d1 = g.coord(i1) - s.u[0];
        f[idx] = pref * std::exp(-(d1 * d1 + d2 * d2 + d3 * d3) * inv2rt);
      }
    }
  }
  return f;
}

KineticField global_maxwellian(const VelocityGrid& g) {
  return maxwellian(GasState(1.0, 0.0, 1.5), g);
}

GasState Moments::recovered() const {
  if (!(rho > 0.0)) throw domain_error("moments: nonpositive density");
  Vec3 u{momentum[0] / rho, momentum[1] / rho, momentum[2] / rho};
  double e = energy / rho - 0.5 * dot(u, u);
  if (!(e > 0.0)) throw domain_error("moments: nonpositive internal energy");
  // e = (3/2) R theta = theta for R = 2/3
  return GasState(rho, u, e);
}

Moments moments(const KineticField& f) {
  const VelocityGrid& g = *f.grid;
  double w = g.cell_volume();
  Moments m{0.0, {0.0, 0.0, 0.0}, 0.0};
  int n = g.n();
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3) {
    double v3 = g.coord(i3);
    for (int i2 = 0; i2 < n; ++i2) {
      double v2 = g.coord(i2);
      for (int i1 = 0; i1 < n; ++i1, ++idx) {
        double v1 = g.coord(i1);
        double fv = f[idx];
        m.rho += fv;
        m.momentum[0] += fv * v1;
        m.momentum[1] += fv * v2;
        m.momentum[2] += fv * v3;
        m.energy += 0.5 * fv * (v1 * v1 + v2 * v2 + v3 * v3);
      }
    }
  }
  m.rho *= w;
  for (auto& c : m.momentum) c *= w;
  m.energy *= w;
  return m;
}

HydroBasis::HydroBasis(const GasState& state, const VelocityGrid& g)
    : state_(state), grid_(&g), M_(maxwellian(state, g)), inv_M_(g) {
  for (std::size_t i = 0; i < M_.size(); ++i) inv_M_[i] = 1.0 / M_[i];

  double srho = std::sqrt(state.rho);
  double srrt = std::sqrt(kGasR * state.rho * state.theta);
  double s6r = std::sqrt(6.0 * state.rho);
  double irt = 1.0 / (kGasR * state.theta);
  for (int k = 0; k < 5; ++k) chi_[k] = KineticField(g);
  for (std::size_t i = 0; i < M_.size(); ++i) {
    Vec3 v = g.node(i);
    Vec3 c{v[0] - state.u[0], v[1] - state.u[1], v[2] - state.u[2]};
    double m = M_[i];
    chi_[0][i] = m / srho;
    chi_[1][i] = c[0] * m / srrt;
    chi_[2][i] = c[1] * m / srrt;
    chi_[3][i] = c[2] * m / srrt;
    chi_[4][i] = (dot(c, c) * irt - 3.0) * m / s6r;
  }

  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) raw_gram_[a][b] = inner_m(chi_[a], chi_[b]);

  double dev = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      double d = std::abs(raw_gram_[a][b] - (a == b ? 1.0 : 0.0));
      if (!std::isfinite(d) || d > dev) dev = d;
    }
  if (!(dev <= 1e-3))
    throw domain_error("HydroBasis: grid too coarse (Gram deviation > 1e-3)");

  // Gram-Schmidt in <.,.>_M restores exact projection algebra.
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < a; ++b) {
      double c = inner_m(chi_[a], chi_[b]);
      for (std::size_t i = 0; i < M_.size(); ++i) chi_[a][i] -= c * chi_[b][i];
    }
    double nrm = std::sqrt(inner_m(chi_[a], chi_[a]));
    for (std::size_t i = 0; i < M_.size(); ++i) chi_[a][i] /= nrm;
  }
}

double HydroBasis::inner_m(const KineticField& f, const KineticField& g) const {
  require_same_grid(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i] * inv_M_[i];
  return s * grid_->cell_volume();
}

KineticField HydroBasis::project_hydro(const KineticField& f) const {
  KineticField out(*grid_);
  for (int k = 0; k < 5; ++k) {
    double c = inner_m(f, chi_[k]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * chi_[k][i];
  }
  return out;
}

KineticField HydroBasis::project_micro(const KineticField& f) const {
  KineticField p0 = project_hydro(f);
  KineticField out(*grid_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] - p0[i];
  return out;
}

KineticField HydroBasis::project_charge(const KineticField& f) const {
  KineticField out(*grid_);
  double c = inner_m(f, chi_[0]);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * chi_[0][i];
  return out;
}

KineticField HydroBasis::project_charge_rest(const KineticField& f) const {
  KineticField pd = project_charge(f);
  KineticField out(*grid_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] - pd[i];
  return out;
}

void WeightSpec::validate() const {
  if (!(q2 > 0.0 && q2 < 0.5)) throw domain_error("WeightSpec: q2 must be in (0, 1/2)");
  if (!(q1 > 0.0 && q1 < 1.0)) throw domain_error("WeightSpec: q1 must be in (0, 1)");
  if (l < alpha_order + beta_order)
    throw domain_error("WeightSpec: l must be >= |alpha| + |beta|");
}

double weight_omega(const WeightSpec& w, double t, const Vec3& v) {
  w.validate();
  double av2 = 1.0 + dot(v, v);
  double q = w.q2 / std::pow(1.0 + t, w.q1);
  int p = 2 * (w.l - w.alpha_order - w.beta_order);
  return std::pow(av2, 0.5 * p) * std::exp(0.5 * q * av2);
}

double weight_integrability(const WeightSpec& w, double t, const GasState& s,
                            const VelocityGrid& g, double eps0) {
  KineticField M = maxwellian(s, g);
  KineticField mu = global_maxwellian(g);
  double acc = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    Vec3 v = g.node(i);
    double om = weight_omega(w, t, v);
    acc += om * om / mu[i] * std::pow(M[i], 2.0 * (1.0 - eps0));
  }
  return acc * g.cell_volume();
}

namespace {

// one-sided 3-point stencils at the boundary keep quadratics exact
template <typename Get, typename Put>
void diff_lines(const VelocityGrid& g, int axis, Get get, Put put) {
  int n = g.n();
  double ih = 1.0 / g.h();
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= n;
  std::size_t outer = g.size() / n;
  for (std::size_t line = 0; line < outer; ++line) {
    // base index of this line
    std::size_t lo = line % stride + (line / stride) * stride * n;
    auto at = [&](int k) { return get(lo + k * stride); };
    put(lo + 0 * stride, (-1.5 * at(0) + 2.0 * at(1) - 0.5 * at(2)) * ih);
    for (int k = 1; k < n - 1; ++k)
      put(lo + k * stride, 0.5 * (at(k + 1) - at(k - 1)) * ih);
    put(lo + (n - 1) * stride,
        (1.5 * at(n - 1) - 2.0 * at(n - 2) + 0.5 * at(n - 3)) * ih);
  }
}

}  // namespace

KineticField velocity_derivative(const KineticField& f, int axis) {
  KineticField out(*f.grid);
  diff_lines(*f.grid, axis, [&](std::size_t i) { return f[i]; },
             [&](std::size_t i, double v) { out[i] = v; });
  return out;
}

KineticField velocity_derivative_transpose(const KineticField& f, int axis) {
  // exact transpose of the stencil above
  const VelocityGrid& g = *f.grid;
  KineticField out(g);
  int n = g.n();
  double ih = 1.0 / g.h();
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= n;
  std::size_t outer = g.size() / n;
  for (std::size_t line = 0; line < outer; ++line) {
    std::size_t lo = line % stride + (line / stride) * stride * n;
    auto src = [&](int k) { return f[lo + k * stride]; };
    auto add = [&](int k, double v) { out[lo + k * stride] += v; };
    add(0, -1.5 * src(0) * ih);
    add(1, 2.0 * src(0) * ih);
    add(2, -0.5 * src(0) * ih);
    for (int k = 1; k < n - 1; ++k) {
      add(k + 1, 0.5 * src(k) * ih);
      add(k - 1, -0.5 * src(k) * ih);
    }
    add(n - 1, 1.5 * src(n - 1) * ih);
    add(n - 2, -2.0 * src(n - 1) * ih);
    add(n - 3, 0.5 * src(n - 1) * ih);
  }
  return out;
}

void write_field_csv(const KineticField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw solver_error("write_field_csv: cannot open " + path);
  os << "i1,i2,i3,v1,v2,v3,value\n";
  const VelocityGrid& g = *f.grid;
  char buf[256];
  std::size_t idx = 0;
  for (int i3 = 0; i3 < g.n(); ++i3)
    for (int i2 = 0; i2 < g.n(); ++i2)
      for (int i1 = 0; i1 < g.n(); ++i1, ++idx) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", i1, i2,
                      i3, g.coord(i1), g.coord(i2), g.coord(i3), f[idx]);
        os << buf;
      }
}

void write_field_binary(const KineticField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw solver_error("write_field_binary: cannot open " + path);
  int n = f.grid->n();
  double vmax = f.grid->v_max();
  os.write(reinterpret_cast<const char*>(&n), sizeof(n));
  os.write(reinterpret_cast<const char*>(&vmax), sizeof(vmax));
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

}  // namespace vml
