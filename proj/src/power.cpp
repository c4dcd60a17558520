#include "bdris/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bdris {

double lambda_opt(double g_gain, double i_th) {
  if (!(i_th > 0.0)) {
    throw std::invalid_argument("lambda_opt: i_th must be positive (degenerate constraint)");
  }
  return g_gain / i_th;
}

namespace {

Binding classify(double p_s, double g_gain, const LinkBudget& budget) {
  if (p_s >= budget.p_max) return Binding::PowerCap;
  if (g_gain > 0.0 && std::abs(g_gain * p_s - budget.i_th) <= 1e-9 * budget.i_th) {
    return Binding::InterferenceBound;
  }
  return Binding::Interior;
}

}  // namespace

PowerSolution power_paper_kkt(double h_gain, double g_gain, std::complex<double> f,
                              const LinkBudget& budget) {
  budget.check();
  const double denom = noise_plus_primary(f, budget);
  PowerSolution sol;

  if (!(h_gain > 0.0)) {
    sol.lambda = (g_gain > 0.0 && budget.i_th > 0.0) ? lambda_opt(g_gain, budget.i_th) : 0.0;
    return sol;  // zero channel: p_s = 0, Interior
  }
  if (g_gain > 0.0 && budget.i_th <= 0.0) {
    // C1 degenerates to p_s = 0
    sol.lambda = std::numeric_limits<double>::infinity();
    sol.binding = Binding::InterferenceBound;
    return sol;
  }

  double bracket;
  if (g_gain <= 0.0) {
    sol.lambda = 0.0;
    bracket = budget.p_max;  // C1 inactive
  } else {
    sol.lambda = lambda_opt(g_gain, budget.i_th);
    bracket = std::max(0.0, 1.0 / sol.lambda - denom / h_gain);
  }
  sol.p_s = std::min(bracket, budget.p_max);
  sol.binding = classify(sol.p_s, g_gain, budget);
  if (sol.p_s == 0.0) {
    // stationarity residual at the origin, clamped to the dual cone
    sol.mu = std::max(0.0, h_gain / (std::numbers::ln2 * denom) - sol.lambda * g_gain);
  }
  return sol;
}

PowerSolution power_boundary(double /*h_gain*/, double g_gain, const LinkBudget& budget) {
  budget.check();
  PowerSolution sol;
  if (g_gain <= 0.0) {
    sol.p_s = budget.p_max;
    sol.binding = Binding::PowerCap;
    return sol;
  }
  if (budget.i_th <= 0.0) {
    sol.lambda = std::numeric_limits<double>::infinity();
    sol.binding = Binding::InterferenceBound;
    return sol;  // p_s = 0 is the only feasible point
  }
  sol.lambda = lambda_opt(g_gain, budget.i_th);
  const double cap = budget.i_th / g_gain;
  if (cap < budget.p_max) {
    sol.p_s = cap;
    sol.binding = Binding::InterferenceBound;
  } else {
    sol.p_s = budget.p_max;
    sol.binding = Binding::PowerCap;
  }
  return sol;
}

double power_oracle_grid(double h_gain, double g_gain, std::complex<double> f,
                         const LinkBudget& budget, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("power_oracle_grid: need >= 2 grid points");
  budget.check();
  double best_p = 0.0;
  double best_se = -1.0;
  for (int i = 0; i < grid_points; ++i) {
    const double p = budget.p_max * double(i) / double(grid_points - 1);
    if (g_gain * p > budget.i_th) continue;  // C1
    const double se = spectral_efficiency(sinr(h_gain, p, f, budget));
    if (se > best_se) {
      best_se = se;
      best_p = p;
    }
  }
  return best_se >= 0.0 ? best_p : 0.0;
}

bool concavity_check(double h_gain, std::complex<double> f, const LinkBudget& budget,
                     int probe_points) {
  if (probe_points < 3) throw std::invalid_argument("concavity_check: need >= 3 probe points");
  budget.check();
  const double dp = budget.p_max / double(probe_points - 1);
  const auto se_at = [&](double p) { return spectral_efficiency(sinr(h_gain, p, f, budget)); };
  for (int i = 1; i + 1 < probe_points; ++i) {
    const double p = dp * i;
    const double second_diff = se_at(p + dp) - 2.0 * se_at(p) + se_at(p - dp);
    if (second_diff > 1e-12) return false;
  }
  return true;
}

}  // namespace bdris
