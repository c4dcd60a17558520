#pragma once

#include <vector>

#include "bdris/channel.hpp"
#include "bdris/link_metrics.hpp"
#include "bdris/phase.hpp"
#include "bdris/power.hpp"

namespace bdris {

struct SolverOptions {
  GainMode gmode = GainMode::FeedVector;
  PowerRule prule = PowerRule::PaperKkt;
  ManifoldStepConfig step;
  double outer_tol = 1e-5;  // spectral-efficiency delta [bits/s/Hz]
  int max_outer = 50;

  void check() const;  // throws std::invalid_argument
};

struct SolverReport {
  double p_s_star = 0.0;
  RisState phi_star;
  std::vector<double> se_trace;    // bits/s/Hz per outer iteration
  double interference_final = 0.0;  // W at the PU
  int outer_iters = 0;
  bool converged = false;
};

// Alternating loop over the power and phase subproblems, starting from
// Phi = I. Each outer iteration re-tightens C1 through the power rule first,
// then ascends the phases at fixed power; the phase update is kept only when
// the re-tightened spectral efficiency does not decrease, which makes the
// reported trace non-decreasing. Every reported iterate is feasible.
SolverReport solve(const ChannelRealization& chan, const LinkBudget& budget,
                   const SolverOptions& opts);

// Same contract with Phi fixed to the co-phasing diagonal baseline; only the
// power step runs, so it converges in one outer iteration.
SolverReport solve_dris(const ChannelRealization& chan, const LinkBudget& budget,
                        const SolverOptions& opts);

}  // namespace bdris
