#include "vmlab/linearized.hpp"

#include <cmath>

namespace vml {

LinearizedOperator::LinearizedOperator(const GasState& state, const VelocityGrid& g0,
                                       const CollisionParams& p)
    : state_(state), engine_(LandauEngine::shared(g0, p)) {
  // anchor every field on the cached engine's grid copy
  const VelocityGrid& g = engine_->grid();
  basis_ = std::make_unique<HydroBasis>(state, g);
  const KineticField& M = basis_->maxwell();
  inv_M_ = KineticField(g);
  for (std::size_t i = 0; i < M.size(); ++i) inv_M_[i] = 1.0 / M[i];
  sigM_ = engine_->conv_phi(M);

  // Jacobi diagonal of -L_M in <.,.>_M:
  //   d(v) ~ sum_i [(M sig_ii)(v+h e_i) + (M sig_ii)(v-h e_i)] / (4 h^2 M(v))
  jacobi_ = KineticField(g);
  int n = g.n();
  double f = 1.0 / (4.0 * g.h() * g.h());
  auto Ms = [&](int i1, int i2, int i3, int c) {
    std::size_t k = g.index(i1, i2, i3);
    return M[k] * sigM_[c][k];
  };
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        std::size_t k = g.index(i1, i2, i3);
        double acc = 0.0;
        acc += Ms(std::min(i1 + 1, n - 1), i2, i3, 0) + Ms(std::max(i1 - 1, 0), i2, i3, 0);
        acc += Ms(i1, std::min(i2 + 1, n - 1), i3, 1) + Ms(i1, std::max(i2 - 1, 0), i3, 1);
        acc += Ms(i1, i2, std::min(i3 + 1, n - 1), 2) + Ms(i1, i2, std::max(i3 - 1, 0), 2);
        jacobi_[k] = acc * f * inv_M_[k];
      }
  double floor = 0.0;
  for (std::size_t k = 0; k < jacobi_.size(); ++k) floor = std::max(floor, jacobi_[k]);
  floor *= 1e-12;
  for (std::size_t k = 0; k < jacobi_.size(); ++k)
    jacobi_[k] = std::max(jacobi_[k], floor);

  // checkerboard modes, orthonormalized against the chi basis and each other
  for (int e1 = 0; e1 < 2; ++e1)
    for (int e2 = 0; e2 < 2; ++e2)
      for (int e3 = 0; e3 < 2; ++e3) {
        if (e1 == 0 && e2 == 0 && e3 == 0) continue;
        KineticField cb(g);
        for (int i3 = 0; i3 < n; ++i3)
          for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1) {
              int par = e1 * i1 + e2 * i2 + e3 * i3;
              cb[g.index(i1, i2, i3)] = ((par & 1) ? -1.0 : 1.0) * M[g.index(i1, i2, i3)];
            }
        for (int k = 0; k < 5; ++k) {
          double c = basis_->inner_m(cb, basis_->chi(k));
          for (std::size_t q = 0; q < cb.size(); ++q) cb[q] -= c * basis_->chi(k)[q];
        }
        for (const auto& prev : checker_) {
          double c = basis_->inner_m(cb, prev);
          for (std::size_t q = 0; q < cb.size(); ++q) cb[q] -= c * prev[q];
        }
        double nn = std::sqrt(basis_->inner_m(cb, cb));
        for (auto& v : cb.values) v /= nn;
        checker_.push_back(std::move(cb));
      }
}

KineticField LinearizedOperator::deflate_full(const KineticField& f) const {
  KineticField out = basis_->project_micro(f);
  for (const auto& cb : checker_) {
    double c = basis_->inner_m(out, cb);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] -= c * cb[q];
  }
  return out;
}

KineticField LinearizedOperator::deflate_charge(const KineticField& f) const {
  KineticField out = basis_->project_charge_rest(f);
  for (const auto& cb : checker_) {
    double c = basis_->inner_m(out, cb);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] -= c * cb[q];
  }
  return out;
}

KineticField LinearizedOperator::apply_full(const KineticField& g) const {
  const VelocityGrid& grd = basis_->grid();
  const KineticField& M = basis_->maxwell();
  KineticField ratio(grd);
  for (std::size_t i = 0; i < g.size(); ++i) ratio[i] = g[i] * inv_M_[i];
  std::array<KineticField, 3> dh{velocity_derivative(ratio, 0),
                                 velocity_derivative(ratio, 1),
                                 velocity_derivative(ratio, 2)};
  std::array<KineticField, 3> Mdh;
  for (int i = 0; i < 3; ++i) {
    Mdh[i] = KineticField(grd);
    for (std::size_t k = 0; k < g.size(); ++k) Mdh[i][k] = M[k] * dh[i][k];
  }
  auto W = engine_->conv_phi_contract(Mdh);  // (phi_ji * (M dh_i))_j

  static constexpr int comp[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  KineticField out(grd);
  for (int j = 0; j < 3; ++j) {
    KineticField S(grd);
    for (std::size_t k = 0; k < g.size(); ++k) {
      double loc = 0.0;
      for (int i = 0; i < 3; ++i) loc += sigM_[comp[j][i]][k] * dh[i][k];
      S[k] = M[k] * (loc - W[j][k]);
    }
    KineticField div = velocity_derivative_transpose(S, j);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= div[k];
  }
  return out;
}

KineticField LinearizedOperator::apply_charge(const KineticField& g) const {
  // Linearized charge collisions transport g against the Maxwellian bath:
  //   LL_M g = div_v [ sigma^M(v) M(v) grad_v(g/M) ],
  // a weighted Dirichlet form: symmetric in <.,.>_M, negative semidefinite
  // pointwise (sigma^M is PSD), kernel exactly span{M}.
  const VelocityGrid& grd = basis_->grid();
  const KineticField& M = basis_->maxwell();
  KineticField ratio(grd);
  for (std::size_t i = 0; i < g.size(); ++i) ratio[i] = g[i] * inv_M_[i];
  std::array<KineticField, 3> dh{velocity_derivative(ratio, 0),
                                 velocity_derivative(ratio, 1),
                                 velocity_derivative(ratio, 2)};
  static constexpr int comp[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  KineticField out(grd);
  for (int j = 0; j < 3; ++j) {
    KineticField S(grd);
    for (std::size_t k = 0; k < g.size(); ++k) {
      double flux = 0.0;
      for (int i = 0; i < 3; ++i) flux += sigM_[comp[j][i]][k] * dh[i][k];
      S[k] = M[k] * flux;
    }
    KineticField div = velocity_derivative_transpose(S, j);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= div[k];
  }
  return out;
}

CgResult invert_negative(const LinearizedOperator& op, const KineticField& rhs,
                         bool charge_operator, const CgOptions& opt) {
  const HydroBasis& basis = op.basis();
  auto project = [&](const KineticField& f) {
    return charge_operator ? op.deflate_charge(f) : op.deflate_full(f);
  };
  auto apply = [&](const KineticField& f) {
    KineticField Lf = charge_operator ? op.apply_charge(f) : op.apply_full(f);
    for (auto& v : Lf.values) v = -v;  // A = -L_M is positive semidefinite
    return Lf;
  };

  double rhs_norm = std::sqrt(basis.inner_m(rhs, rhs));
  if (rhs_norm == 0.0) return {KineticField(op.grid()), 0, 0.0};

  // range membership is a P1 (resp. Pr) condition; the checkerboard
  // deflation below is solver-internal and not part of the contract
  {
    KineticField p1 = charge_operator ? basis.project_charge_rest(rhs)
                                      : basis.project_micro(rhs);
    KineticField gap(op.grid());
    for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = rhs[i] - p1[i];
    double g = std::sqrt(basis.inner_m(gap, gap));
    if (g > 1e-8 * rhs_norm)
      throw solver_error("invert: rhs not in the operator range (P rhs != rhs)");
  }
  KineticField prj = project(rhs);

  const KineticField& diag = op.jacobi_diagonal();
  auto precond = [&](const KineticField& r) {
    KineticField z(op.grid());
    if (opt.precondition)
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = r[i] / diag[i];
    else
      z.values = r.values;
    return project(z);
  };

  KineticField x(op.grid());
  KineticField r = prj;
  KineticField z = precond(r);
  KineticField p = z;
  double rz = basis.inner_m(r, z);
  CgResult res;
  for (int it = 1; it <= opt.max_iter; ++it) {
    KineticField Ap = apply(p);
    double pAp = basis.inner_m(p, Ap);
    if (!(pAp > 0.0)) throw solver_error("invert: operator lost positivity");
    double alpha = rz / pAp;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    r = project(r);  // deflate the null-space leakage every iteration
    double rnorm = std::sqrt(basis.inner_m(r, r));
    res.iterations = it;
    res.relative_residual = rnorm / rhs_norm;
    if (res.relative_residual <= opt.tol) {
      res.x = project(x);
      return res;
    }
    z = precond(r);
    double rz_new = basis.inner_m(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  throw solver_error("invert: CG did not converge in " +
                     std::to_string(opt.max_iter) + " iterations (residual " +
                     std::to_string(res.relative_residual) + ")");
}

KineticField invert_LM(const KineticField& rhs, const LinearizedOperator& op,
                       const CgOptions& opt) {
  // L_M X = rhs  <=>  (-L_M) X = -rhs
  KineticField neg(op.grid());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -rhs[i];
  return invert_negative(op, neg, false, opt).x;
}

KineticField invert_LLM(const KineticField& rhs, const LinearizedOperator& op,
                        const CgOptions& opt) {
  KineticField neg(op.grid());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -rhs[i];
  return invert_negative(op, neg, true, opt).x;
}

}  // namespace vml
