#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/link_metrics.hpp"

namespace bdris {

struct ManifoldStepConfig {
  double eta0 = 0.1;           // initial step size
  double armijo_shrink = 0.5;  // backtracking factor, in (0,1)
  double armijo_slope = 1e-4;  // sufficient-ascent slope, in (0,1)
  int max_inner = 500;
  double epsilon = 1e-6;       // Frobenius convergence threshold on ||Phi_{k+1} - Phi_k||
  double mu0 = 0.0;            // initial interference multiplier
  double rho = 0.0;            // multiplier subgradient step; 0 disables in-loop enforcement

  void check() const;  // throws std::invalid_argument
};

struct PhaseIterate {
  int iter = 0;
  double objective = 0.0;  // Lagrangian value after the step
  double violation = 0.0;  // max(0, g_gain * p_s - i_th)
  double step = 0.0;       // accepted step size (0 for the initial record)
};

struct PhaseTrace {
  std::vector<PhaseIterate> iterates;
  bool converged = false;
  double final_delta = 0.0;  // ||Phi_{k+1} - Phi_k||_F at exit
};

// f(Phi) - mu * (g_gain * p_s - i_th) with f(Phi) = h_gain * p_s / (sigma^2 + |f|^2 Qp).
double lagrangian_value(const ChannelRealization& chan, const RisState& ris, GainMode gmode,
                        double p_s, double mu, const LinkBudget& budget);

// Wirtinger gradient of the Lagrangian with respect to conj(Phi). In
// FeedVector mode this matches central finite differences over the 2M^2 real
// coordinates (directional derivative 2 Re tr(dPhi^H G)). PaperLiteralNorm
// mode returns the literal rank-one expression
// (2 p_s / ln2) conj(h) h^T Phi - 2 mu p_s conj(g) g^T Phi.
Eigen::MatrixXcd euclidean_gradient(const ChannelRealization& chan, const RisState& ris,
                                    GainMode gmode, double p_s, double mu,
                                    const LinkBudget& budget);

// G - Phi (Phi^H G + G^H Phi)/2; the result P satisfies Phi^H P + P^H Phi = 0.
Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& phi, const Eigen::MatrixXcd& grad);

// Polar factor U V^H of X = U S V^H, the closest unitary matrix in Frobenius
// norm. Throws std::invalid_argument when X is rank deficient
// (smin <= 1e-12 * smax).
Eigen::MatrixXcd retract_svd(const Eigen::MatrixXcd& x);

// Projected-ascent loop on the unitary manifold with Armijo backtracking and
// SVD retraction; stops when ||Phi_{k+1} - Phi_k||_F < epsilon or max_inner
// is reached. mu is updated by mu <- [mu + rho (g_gain p_s - i_th)]^+ after
// every accepted step.
std::pair<RisState, PhaseTrace> riemannian_ascend(const ChannelRealization& chan,
                                                  const RisState& ris0, GainMode gmode,
                                                  double p_s, const LinkBudget& budget,
                                                  const ManifoldStepConfig& cfg);

// Co-phasing diagonal Phi_mm = exp(-j arg(conj(h_m) a_m)), the unit-modulus
// diagonal maximizing |h^H Phi a|. Entries with h_m a_m = 0 get phase 0.
RisState dris_baseline(const Eigen::VectorXcd& h, const Eigen::VectorXcd& a);

}  // namespace bdris
