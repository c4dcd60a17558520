#pragma once

#include <complex>

#include "bdris/link_metrics.hpp"

namespace bdris {

// PaperKkt follows the closed-form water-filling rule; BoundaryOptimal sits
// on the tighter of the interference bound and the power cap, which is the
// exact maximizer of a rate that is strictly increasing in power.
enum class PowerRule { PaperKkt, BoundaryOptimal };

enum class Binding { InterferenceBound, PowerCap, Interior };

struct PowerSolution {
  double p_s = 0.0;     // W, in [0, p_max]
  double lambda = 0.0;  // interference multiplier, >= 0
  double mu = 0.0;      // non-negativity multiplier, 0 whenever p_s > 0
  Binding binding = Binding::Interior;
};

// g_gain / i_th. Throws std::invalid_argument when i_th <= 0 (degenerate
// constraint; the caller must treat p_s = 0).
double lambda_opt(double g_gain, double i_th);

// p_s = min([1/lambda - (sigma^2 + |f|^2 Qp)/h_gain]^+, p_max) with
// lambda = lambda_opt(g_gain, i_th). g_gain = 0 leaves C1 inactive and the
// bracket is taken as p_max; i_th = 0 with g_gain > 0 forces p_s = 0.
PowerSolution power_paper_kkt(double h_gain, double g_gain, std::complex<double> f,
                              const LinkBudget& budget);

// p_s = min(p_max, i_th/g_gain), the tighter of C1 and C2.
PowerSolution power_boundary(double h_gain, double g_gain, const LinkBudget& budget);

// Exhaustive grid search of log2(1 + sinr) over [0, p_max], discarding points
// violating C1; returns the argmax (0 if nothing is feasible).
double power_oracle_grid(double h_gain, double g_gain, std::complex<double> f,
                         const LinkBudget& budget, int grid_points);

// Centered second differences of p -> log2(1 + sinr(p)) over [0, p_max];
// true iff every interior probe is <= +1e-12.
bool concavity_check(double h_gain, std::complex<double> f, const LinkBudget& budget,
                     int probe_points);

}  // namespace bdris
