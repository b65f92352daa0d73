#include "vmlab/landau.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vml {

namespace {

// phi_ij(w) = (delta_ij - w_i w_j / |w|^2) |w|^{gamma+2}; component order
// 11,22,33,12,13,23. |w|^2 is computed once so the projector annihilates w
// exactly in floating point.
inline std::array<double, 6> phi_components(double w1, double w2, double w3,
                                            double gamma) {
  double s = w1 * w1 + w2 * w2 + w3 * w3;
  std::array<double, 6> out{};
  if (s == 0.0) return out;
  double r;
  if (gamma == -3.0)
    r = 1.0 / std::sqrt(s);
  else
    r = std::pow(s, 0.5 * (gamma + 2.0));
  double is = 1.0 / s;
  out[0] = r * (1.0 - w1 * w1 * is);
  out[1] = r * (1.0 - w2 * w2 * is);
  out[2] = r * (1.0 - w3 * w3 * is);
  out[3] = r * (-w1 * w2 * is);
  out[4] = r * (-w1 * w3 * is);
  out[5] = r * (-w2 * w3 * is);
  return out;
}

}  // namespace

namespace {

// int_{[-1/2,1/2]^3} |x|^{gamma+2} dx by dyadic annuli: the annulus between
// the unit cube and its half-size copy is smooth, the rest is a geometric
// series under x -> x/2.
double unit_cube_power_integral(double p) {
  static std::mutex mtx;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  const int m = 160;
  double hh = 1.0 / m;
  double annulus = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double x = -0.5 + (i + 0.5) * hh;
        double y = -0.5 + (j + 0.5) * hh;
        double z = -0.5 + (k + 0.5) * hh;
        if (std::max({std::abs(x), std::abs(y), std::abs(z)}) < 0.25) continue;
        annulus += std::pow(x * x + y * y + z * z, 0.5 * p);
      }
  annulus *= hh * hh * hh;
  double val = annulus / (1.0 - std::pow(2.0, -(p + 3.0)));
  cache[p] = val;
  return val;
}

// exact cell average of |w|^{gamma+2} over the lattice cell at offset Delta
// (tensor Gauss-Legendre, smooth off the singular cell)
double radial_cell_average(int d1, int d2, int d3, double h, double gamma) {
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  double acc = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        double w1 = (d1 + 0.5 * gx[a]) * h;
        double w2 = (d2 + 0.5 * gx[b]) * h;
        double w3 = (d3 + 0.5 * gx[c]) * h;
        double s2 = w1 * w1 + w2 * w2 + w3 * w3;
        acc += gw[a] * gw[b] * gw[c] / 8.0 * std::pow(s2, 0.5 * (gamma + 2.0));
      }
  return acc;
}

}  // namespace

LandauEngine::LandauEngine(const VelocityGrid& g, const CollisionParams& p)
    : grid_(nullptr), grid_store_(g), params_(p) {
  params_.validate();
  grid_ = &grid_store_;
  int n = g.n();
  np_ = Fft::good_size(static_cast<std::size_t>(2 * n - 1));
  fft_ = std::make_unique<Fft3>(np_);

  // Kernel tables with the h^3 quadrature weight folded in. The midpoint
  // rule handles every off-center cell; the Delta = 0 entry absorbs the
  // exact total integral of phi over the table's support cube minus the
  // midpoint sum (singularity subtraction). The correction multiplies only
  // w = 0, so the contraction identity sum_i K_ji(Delta) Delta_i = 0 -- the
  // source of the exact conservation and equilibrium cancellations -- holds
  // to the digit.
  double h = g.h();
  double w3q = g.cell_volume();
  double support = (2.0 * n - 1.0) * h;  // kernel table support cube side
  double total = (2.0 / 3.0) * unit_cube_power_integral(params_.gamma + 2.0) *
                 std::pow(support, params_.gamma + 5.0);
  std::vector<cplx> buf(fft_->volume());
  for (int c = 0; c < 6; ++c) kernel_hat_[c].assign(fft_->volume(), cplx(0.0, 0.0));
  std::size_t P = np_;
  double midsum[3] = {0.0, 0.0, 0.0};
  for (int d3 = -(n - 1); d3 <= n - 1; ++d3)
    for (int d2 = -(n - 1); d2 <= n - 1; ++d2)
      for (int d1 = -(n - 1); d1 <= n - 1; ++d1) {
        auto ph = phi_components(d1 * h, d2 * h, d3 * h, params_.gamma);
        // radially exact cells near the singularity: scaling by the exact
        // cell average of |w|^{gamma+2} keeps K(Delta) a multiple of
        // phi(Delta h), so the contraction identity is untouched
        int shell = std::max({std::abs(d1), std::abs(d2), std::abs(d3)});
        if (shell >= 1 && shell <= 6) {
          double s2 = (d1 * d1 + d2 * d2 + d3 * d3) * h * h;
          double ratio = radial_cell_average(d1, d2, d3, h, params_.gamma) /
                         std::pow(s2, 0.5 * (params_.gamma + 2.0));
          for (int c = 0; c < 6; ++c) ph[c] *= ratio;
        }
        for (int c = 0; c < 3; ++c) midsum[c] += ph[c] * w3q;
        std::size_t i1 = static_cast<std::size_t>((d1 + static_cast<int>(P)) % P);
        std::size_t i2 = static_cast<std::size_t>((d2 + static_cast<int>(P)) % P);
        std::size_t i3 = static_cast<std::size_t>((d3 + static_cast<int>(P)) % P);
        std::size_t idx = i1 + P * (i2 + P * i3);
        for (int c = 0; c < 6; ++c) kernel_hat_[c][idx] = cplx(ph[c] * w3q, 0.0);
      }
  for (int c = 0; c < 3; ++c) {
    singular_diag_[c] = (total - midsum[c]) / w3q;
    kernel_hat_[c][0] = cplx(total - midsum[c], 0.0);
  }
  for (int c = 0; c < 6; ++c) fft_->forward(kernel_hat_[c]);

  // fields live on the engine's own grid copy (engines are cached and
  // outlive caller grids)
  mu_ = global_maxwellian(*grid_);
  inv_mu_ = KineticField(*grid_);
  for (std::size_t i = 0; i < mu_.size(); ++i) inv_mu_[i] = 1.0 / mu_[i];
}

double LandauEngine::singular_cell_diagonal() const { return singular_diag_[0]; }

std::shared_ptr<const LandauEngine> LandauEngine::shared(const VelocityGrid& g,
                                                         const CollisionParams& p) {
  static std::mutex mtx;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const LandauEngine>>
      cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(g.n(), g.v_max(), p.gamma);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto eng = std::make_shared<const LandauEngine>(g, p);
  cache[key] = eng;
  return eng;
}

std::vector<cplx> LandauEngine::forward_padded(const KineticField& f) const {
  int n = grid_->n();
  std::size_t P = np_;
  std::vector<cplx> buf(fft_->volume(), cplx(0.0, 0.0));
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1, ++idx)
        buf[i1 + P * (i2 + P * static_cast<std::size_t>(i3))] = cplx(f[idx], 0.0);
  fft_->forward(buf);
  return buf;
}

KineticField LandauEngine::extract(const std::vector<cplx>& spec) const {
  std::vector<cplx> buf = spec;
  fft_->inverse(buf);
  int n = grid_->n();
  std::size_t P = np_;
  KineticField out(*grid_);
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1, ++idx)
        out[idx] = buf[i1 + P * (i2 + P * static_cast<std::size_t>(i3))].real();
  return out;
}

std::array<KineticField, 6> LandauEngine::conv_phi(const KineticField& f) const {
  require_same_grid(f, mu_);
  std::vector<cplx> fhat = forward_padded(f);
  std::array<KineticField, 6> out;
  std::vector<cplx> tmp(fhat.size());
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < fhat.size(); ++i) tmp[i] = fhat[i] * kernel_hat_[c][i];
    out[c] = extract(tmp);
  }
  return out;
}

std::array<KineticField, 3> LandauEngine::conv_phi_contract(
    const std::array<KineticField, 3>& F) const {
  std::array<std::vector<cplx>, 3> Fh;
  for (int i = 0; i < 3; ++i) Fh[i] = forward_padded(F[i]);
  // row j of the symmetric matrix: components (j,i)
  static constexpr int comp[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  std::array<KineticField, 3> out;
  std::vector<cplx> tmp(Fh[0].size());
  for (int j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < tmp.size(); ++k)
      tmp[k] = Fh[0][k] * kernel_hat_[comp[j][0]][k] +
               Fh[1][k] * kernel_hat_[comp[j][1]][k] +
               Fh[2][k] * kernel_hat_[comp[j][2]][k];
    out[j] = extract(tmp);
  }
  return out;
}

std::array<KineticField, 3> LandauEngine::mu_relative_gradient(
    const KineticField& f) const {
  require_same_grid(f, mu_);
  KineticField ratio(*grid_);
  for (std::size_t i = 0; i < f.size(); ++i) ratio[i] = f[i] * inv_mu_[i];
  std::array<KineticField, 3> out;
  for (int ax = 0; ax < 3; ++ax) {
    KineticField d = velocity_derivative(ratio, ax);
    out[ax] = KineticField(*grid_);
    for (std::size_t i = 0; i < f.size(); ++i) {
      Vec3 v = grid_->node(i);
      out[ax][i] = mu_[i] * d[i] - v[ax] * f[i];
    }
  }
  return out;
}

std::array<KineticField, 6> LandauEngine::conv_phi_direct(
    const KineticField& f) const {
  const VelocityGrid& g = *grid_;
  double h = g.h();
  double w3q = g.cell_volume();
  std::array<KineticField, 6> out;
  for (int c = 0; c < 6; ++c) out[c] = KineticField(g);
  int n = g.n();
  for (int a3 = 0; a3 < n; ++a3)
    for (int a2 = 0; a2 < n; ++a2)
      for (int a1 = 0; a1 < n; ++a1) {
        std::size_t ia = g.index(a1, a2, a3);
        std::array<double, 6> acc{};
        std::size_t ib = 0;
        for (int b3 = 0; b3 < n; ++b3)
          for (int b2 = 0; b2 < n; ++b2)
            for (int b1 = 0; b1 < n; ++b1, ++ib) {
              int d1 = a1 - b1, d2 = a2 - b2, d3 = a3 - b3;
              std::array<double, 6> ph;
              if (d1 == 0 && d2 == 0 && d3 == 0) {
                ph = {singular_diag_[0], singular_diag_[1], singular_diag_[2],
                      0.0, 0.0, 0.0};
              } else {
                ph = phi_components(d1 * h, d2 * h, d3 * h, params_.gamma);
                int shell = std::max({std::abs(d1), std::abs(d2), std::abs(d3)});
                if (shell <= 6) {
                  double s2 = (d1 * d1 + d2 * d2 + d3 * d3) * h * h;
                  double ratio = radial_cell_average(d1, d2, d3, h, params_.gamma) /
                                 std::pow(s2, 0.5 * (params_.gamma + 2.0));
                  for (int c = 0; c < 6; ++c) ph[c] *= ratio;
                }
              }
              double fb = f[ib];
              for (int c = 0; c < 6; ++c) acc[c] += ph[c] * fb;
            }
        for (int c = 0; c < 6; ++c) out[c][ia] = acc[c] * w3q;
      }
  return out;
}

KineticField collide(const KineticField& G1, const KineticField& G2,
                     const LandauEngine& eng) {
  require_same_grid(G1, G2);
  if (!( *G1.grid == eng.grid())) throw domain_error("collide: grid mismatch");

  auto A = eng.conv_phi(G1);                       // phi_ji * G1
  auto dG1 = eng.mu_relative_gradient(G1);
  auto B = eng.conv_phi_contract(dG1);             // sum_i phi_ji * D~_i G1
  auto dG2 = eng.mu_relative_gradient(G2);

  static constexpr int comp[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  const VelocityGrid& g = eng.grid();
  KineticField Q(g);
  for (int j = 0; j < 3; ++j) {
    KineticField J(g);
    for (std::size_t k = 0; k < J.size(); ++k) {
      double flux = -B[j][k] * G2[k];
      for (int i = 0; i < 3; ++i) flux += A[comp[j][i]][k] * dG2[i][k];
      J[k] = flux;
    }
    KineticField div = velocity_derivative_transpose(J, j);
    for (std::size_t k = 0; k < Q.size(); ++k) Q[k] -= div[k];
  }
  return Q;
}

std::array<KineticField, 6> sigma_matrix(const LandauEngine& eng) {
  return eng.conv_phi(eng.mu());
}

double sigma_min_eigenvalue(const std::array<KineticField, 6>& sig) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sig[0].size(); ++k) {
    // eigenvalues of the symmetric 3x3 via the characteristic cubic
    double a11 = sig[0][k], a22 = sig[1][k], a33 = sig[2][k];
    double a12 = sig[3][k], a13 = sig[4][k], a23 = sig[5][k];
    double q = (a11 + a22 + a33) / 3.0;
    double b11 = a11 - q, b22 = a22 - q, b33 = a33 - q;
    double p2 = b11 * b11 + b22 * b22 + b33 * b33 +
                2.0 * (a12 * a12 + a13 * a13 + a23 * a23);
    double p = std::sqrt(p2 / 6.0);
    double eig;
    if (p == 0.0) {
      eig = q;
    } else {
      double ip = 1.0 / p;
      double c11 = b11 * ip, c22 = b22 * ip, c33 = b33 * ip;
      double c12 = a12 * ip, c13 = a13 * ip, c23 = a23 * ip;
      double detB = c11 * (c22 * c33 - c23 * c23) - c12 * (c12 * c33 - c23 * c13) +
                    c13 * (c12 * c23 - c22 * c13);
      double r = std::clamp(detB / 2.0, -1.0, 1.0);
      double phi = std::acos(r) / 3.0;
      eig = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
    }
    best = std::min(best, eig);
  }
  return best;
}

double sigma_norm_sq(const KineticField& f, const std::array<KineticField, 6>& sig,
                     const std::optional<WeightSpec>& w, double t) {
  const VelocityGrid& g = *f.grid;
  std::array<KineticField, 3> df{velocity_derivative(f, 0), velocity_derivative(f, 1),
                                 velocity_derivative(f, 2)};
  static constexpr int comp[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    Vec3 v = g.node(k);
    double term = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = sig[comp[i][j]][k];
        term += s * df[i][k] * df[j][k] + s * v[i] * v[j] * 0.25 * f[k] * f[k];
      }
    if (w) {
      double om = weight_omega(*w, t, v);
      term *= om * om;
    }
    acc += term;
  }
  return acc * g.cell_volume();
}

KineticField gamma_bilinear(const KineticField& h1, const KineticField& h2,
                            const LandauEngine& eng) {
  require_same_grid(h1, h2);
  const VelocityGrid& g = eng.grid();
  const KineticField& mu = eng.mu();
  KineticField a(g), b(g);
  std::vector<double> smu(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    smu[i] = std::sqrt(mu[i]);
    a[i] = smu[i] * h1[i];
    b[i] = smu[i] * h2[i];
  }
  KineticField q = collide(a, b, eng);
  KineticField out(g);
  for (std::size_t i = 0; i < mu.size(); ++i)
    out[i] = (smu[i] < 1e-150) ? 0.0 : q[i] / smu[i];
  return out;
}

}  // namespace vml
