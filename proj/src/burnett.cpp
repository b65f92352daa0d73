#include "vmlab/burnett.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vml {

double burnett_A_hat(const Vec3& v, int j) {
  return 0.5 * (dot(v, v) - 5.0) * v[j];
}

double burnett_B_hat(const Vec3& v, int i, int j) {
  return v[i] * v[j] - (i == j ? dot(v, v) / 3.0 : 0.0);
}

namespace {

KineticField scaled_moment_rhs(const LinearizedOperator& op,
                               const std::function<double(const Vec3&)>& poly) {
  const VelocityGrid& g = op.grid();
  const GasState& s = op.state();
  const KineticField& M = op.basis().maxwell();
  double isrt = 1.0 / std::sqrt(kGasR * s.theta);
  KineticField rhs(g);
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    Vec3 v = g.node(k);
    Vec3 c{(v[0] - s.u[0]) * isrt, (v[1] - s.u[1]) * isrt, (v[2] - s.u[2]) * isrt};
    rhs[k] = poly(c) * M[k];
  }
  // quadrature leaves an O(h^inf) kernel component; project it away so the
  // rhs sits in the range exactly
  return op.basis().project_micro(rhs);
}

}  // namespace

KineticField burnett_rhs_A(const LinearizedOperator& op, int j) {
  return scaled_moment_rhs(op, [j](const Vec3& c) { return burnett_A_hat(c, j); });
}

KineticField burnett_rhs_B(const LinearizedOperator& op, int i, int j) {
  return scaled_moment_rhs(op,
                           [i, j](const Vec3& c) { return burnett_B_hat(c, i, j); });
}

KineticField burnett_A(const LinearizedOperator& op, int j, const CgOptions& opt) {
  return invert_LM(burnett_rhs_A(op, j), op, opt);
}

KineticField burnett_B(const LinearizedOperator& op, int i, int j,
                       const CgOptions& opt) {
  return invert_LM(burnett_rhs_B(op, i, j), op, opt);
}

BurnettSet burnett_functions(const LinearizedOperator& op, const CgOptions& opt) {
  BurnettSet set{op.state(), {}, {}};
  for (int j = 0; j < 3; ++j) set.A[j] = burnett_A(op, j, opt);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      set.B[i][j] = burnett_B(op, i, j, opt);
      if (j != i) set.B[j][i] = set.B[i][j];
    }
  return set;
}

TransportCoeffs transport_coefficients(double theta, int n_per_axis,
                                       const CollisionParams& p,
                                       const CgOptions& opt) {
  if (!(theta > 0.0)) throw domain_error("transport_coefficients: theta must be > 0");
  GasState s(1.0, 0.0, theta);
  VelocityGrid g(n_per_axis, VelocityGrid::default_v_max(0.0, theta));
  LinearizedOperator op(s, g, p);

  TransportCoeffs out;
  out.theta = theta;
  double w3 = g.cell_volume();
  double isrt = 1.0 / std::sqrt(kGasR * theta);

  KineticField B12 = burnett_B(op, 0, 1, opt);
  KineticField A1 = burnett_A(op, 0, opt);
  double accB = 0.0, accA = 0.0;
  for (std::size_t k = 0; k < B12.size(); ++k) {
    Vec3 v = g.node(k);
    Vec3 c{v[0] * isrt, v[1] * isrt, v[2] * isrt};
    accB += burnett_B_hat(c, 0, 1) * B12[k];
    accA += burnett_A_hat(c, 0) * A1[k];
  }
  out.kappa1 = -kGasR * theta * accB * w3;
  out.kappa2 = -kGasR * kGasR * theta * accA * w3;

  // sigma(theta): -int v_i LL^{-1} P_r(v_j M) dv = delta_ij sigma(theta)
  KineticField vjM(g);
  const KineticField& M = op.basis().maxwell();
  for (std::size_t k = 0; k < vjM.size(); ++k) vjM[k] = g.node(k)[0] * M[k];
  KineticField X = invert_LLM(op.basis().project_charge_rest(vjM), op, opt);
  double diag = 0.0;
  double off = 0.0;
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < X.size(); ++k) acc += g.node(k)[i] * X[k];
    acc *= -w3;
    if (i == 0)
      diag = acc;
    else
      off = std::max(off, std::abs(acc));
  }
  out.sigma_theta = diag;
  out.offdiag_max = off;
  return out;
}

KineticField correction_Gbar(double dtheta_dy, const Vec3& du_dy,
                             const LinearizedOperator& op, double eps, double a,
                             const CgOptions& opt) {
  const GasState& s = op.state();
  double pref = std::pow(eps, 1.0 - a);
  double ct = std::sqrt(kGasR) / std::sqrt(s.theta) * dtheta_dy;
  KineticField out(op.grid());
  if (ct != 0.0) {
    KineticField A1 = burnett_A(op, 0, opt);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += ct * A1[k];
  }
  for (int j = 0; j < 3; ++j) {
    if (du_dy[j] == 0.0) continue;
    KineticField B1j = burnett_B(op, 0, j, opt);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += du_dy[j] * B1j[k];
  }
  for (auto& v : out.values) v *= pref;
  return out;
}

KineticField correction_Gbar_direct(double dtheta_dy, const Vec3& du_dy,
                                    const LinearizedOperator& op, double eps,
                                    double a, const CgOptions& opt) {
  const GasState& s = op.state();
  const VelocityGrid& g = op.grid();
  const KineticField& M = op.basis().maxwell();
  KineticField rhs(g);
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    Vec3 v = g.node(k);
    Vec3 c{v[0] - s.u[0], v[1] - s.u[1], v[2] - s.u[2]};
    double term = dot(c, c) / (2.0 * s.theta) * dtheta_dy;
    term += v[0] * du_dy[0] + v[1] * du_dy[1] + v[2] * du_dy[2];
    rhs[k] = v[0] * term * M[k] / (kGasR * s.theta);
  }
  rhs = op.basis().project_micro(rhs);
  KineticField X = invert_LM(rhs, op, opt);
  double pref = std::pow(eps, 1.0 - a);
  for (auto& v : X.values) v *= pref;
  return X;
}

KineticField permute_axes(const KineticField& f, int p1, int p2, int p3) {
  const VelocityGrid& g = *f.grid;
  int n = g.n();
  KineticField out(g);
  int idx[3];
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        int src[3] = {i1, i2, i3};
        idx[0] = src[p1];
        idx[1] = src[p2];
        idx[2] = src[p3];
        out[g.index(i1, i2, i3)] = f[g.index(idx[0], idx[1], idx[2])];
      }
  return out;
}

ReferenceProfiles::ReferenceProfiles(int n, const CollisionParams& p)
    : params(p),
      grid(n, VelocityGrid::balanced_v_max(n, 0.0, 1.5)),
      power(1.0 - p.gamma / 2.0) {
  GasState ref(1.0, 0.0, theta_ref);  // R theta = 1
  LinearizedOperator op(ref, grid, p);
  A1 = burnett_A(op, 0);
  B11 = burnett_B(op, 0, 0);
  B12 = burnett_B(op, 0, 1);
  B13 = permute_axes(B12, 0, 2, 1);  // axes 2<->3 swap maps B12 to B13

  const KineticField& M = op.basis().maxwell();
  KineticField v1M(grid);
  for (std::size_t k = 0; k < v1M.size(); ++k) v1M[k] = grid.node(k)[0] * M[k];
  S1 = invert_LLM(op.basis().project_charge_rest(v1M), op);

  double w3 = grid.cell_volume();
  double accA = 0.0, accB = 0.0, accS = 0.0;
  for (std::size_t k = 0; k < A1.size(); ++k) {
    Vec3 v = grid.node(k);
    accA += burnett_A_hat(v, 0) * A1[k];
    accB += burnett_B_hat(v, 0, 1) * B12[k];
    accS += v[0] * S1[k];
  }
  kappa1_ref = -kGasR * theta_ref * accB * w3;
  kappa2_ref = -kGasR * kGasR * theta_ref * accA * w3;
  sigma_ref = -accS * w3;
}

std::shared_ptr<const ReferenceProfiles> ReferenceProfiles::shared(
    int n, const CollisionParams& p) {
  static std::mutex mtx;
  static std::map<std::pair<int, double>, std::shared_ptr<const ReferenceProfiles>>
      cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(n, p.gamma);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ref = std::make_shared<const ReferenceProfiles>(n, p);
  cache[key] = ref;
  return ref;
}

}  // namespace vml
