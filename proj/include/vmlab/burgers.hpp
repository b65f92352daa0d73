#ifndef VMLAB_BURGERS_HPP
#define VMLAB_BURGERS_HPP

#include <vector>

#include "vmlab/euler_waves.hpp"
#include "vmlab/gas_state.hpp"

namespace vml {

/// Initial datum of the smoothing Burgers problem:
/// w0(x) = (w+ + w-)/2 + (w+ - w-)/2 * tanh(x/delta).
double initial_profile(double w_minus, double w_plus, double delta, double x);

/// Solution of w_t + w w_x = 0 with the tanh datum, by characteristics:
/// returns w0(x0) where x = x0 + w0(x0) t. Also exposes the foot point and
/// the analytic x-derivatives (implicit differentiation).
struct CharSolution {
  double w;
  double x0;
  double wx;   // dw/dx  = w0'(x0) / (1 + w0'(x0) t)
  double wxx;  // d2w/dx2 = w0''(x0) / (1 + w0'(x0) t)^3
};
CharSolution solve_characteristics(double w_minus, double w_plus, double delta,
                                   double t, double x);

enum class WaveKind { exact_fan, smoothed };

/// Rarefaction-wave description evaluable at any (t >= 0, x): either the
/// exact self-similar fan or its Burgers-smoothed approximation.
struct WaveProfile {
  RiemannData data;
  double delta = 0.2;
  WaveKind kind = WaveKind::smoothed;

  // derived
  double w_minus = 0.0, w_plus = 0.0, sigma = 0.0, S_star = 0.0, r31 = 0.0;

  WaveProfile(const RiemannData& d, double delta_, WaveKind kind_);
};

/// Gas state of the smoothed wave at (t, x) (kind must be `smoothed`).
GasState smooth_wave_state(const WaveProfile& p, double t, double x);

/// Smoothed-wave state plus analytic first/second x-derivatives of
/// (rho, u1, theta).
struct WaveLocal {
  GasState state;
  double w, wx, wxx;
  double drho_dx, du1_dx, dtheta_dx;
  double d2rho_dx2, d2u1_dx2, d2theta_dx2;
};
WaveLocal smooth_wave_local(const WaveProfile& p, double t, double x);

/// Evaluate the wave in either kind at (t,x); for the exact fan, t > 0.
GasState wave_state(const WaveProfile& p, double t, double x);

struct DecayRow {
  double t;
  double p;      // Lebesgue exponent (inf encoded as +infinity)
  int order;     // derivative order, 1 or 2
  double norm;   // measured ||d^order/dx (rho,u1,theta)||_p, max over components
  double bound;  // C sigma^{1/p} (delta/sigma + t)^{-1+1/p}*... with C fitted
};

struct DecayFit {
  double exponent;   // fitted e in norm ~ C (t0 + t)^e
  double shift;      // fitted t0 >= 0
  double constant;   // fitted C
  double r_squared;  // of the log-log fit at the chosen shift
};

struct DecayReport {
  std::vector<DecayRow> rows;
  // one fit per (p, order) pair, for the u1 component, in row-group order
  std::vector<DecayFit> fits;
  std::vector<double> p_values;
  std::vector<int> orders;
};

/// Lp norms of the first and second x-derivatives of the smoothed wave at the
/// given times, with shifted power-law fits of the time decay.
/// p = inf is encoded as std::numeric_limits<double>::infinity().
DecayReport decay_report(const WaveProfile& p, const std::vector<double>& times,
                         const std::vector<double>& p_list);

/// Sup-norm distance between the smoothed wave at time t and the exact fan
/// (max over the rho, u1, theta components).
double fan_distance(const WaveProfile& p, double t);

/// Least-squares fit of ln(norm) vs ln(t0 + t) with the shift t0 optimized by
/// golden-section search on the residual.
DecayFit fit_shifted_power_law(const std::vector<double>& ts,
                               const std::vector<double>& ys);

}  // namespace vml

#endif
