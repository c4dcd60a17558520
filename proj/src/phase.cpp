#include "bdris/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bdris {

namespace {

constexpr int kMaxBacktracks = 120;

// Fast-path condition bound under which the Gram-spectrum polar factor is
// accurate; ascent candidates Phi + eta*P with tangent P are always well
// inside it (their singular values are >= 1).
constexpr double kPolarConditionFloor = 1e-3;

}  // namespace

void ManifoldStepConfig::check() const {
  const bool ok = eta0 > 0.0 && armijo_shrink > 0.0 && armijo_shrink < 1.0 &&
                  armijo_slope > 0.0 && armijo_slope < 1.0 && max_inner >= 1 &&
                  epsilon > 0.0 && mu0 >= 0.0 && rho >= 0.0;
  if (!ok) throw std::invalid_argument("ManifoldStepConfig: parameter out of range");
}

double lagrangian_value(const ChannelRealization& chan, const RisState& ris, GainMode gmode,
                        double p_s, double mu, const LinkBudget& budget) {
  const double denom = noise_plus_primary(chan.f, budget);
  const double f_phi = effective_gain(chan.h, ris, gmode) * p_s / denom;
  const double penalty = effective_gain(chan.g, ris, gmode) * p_s - budget.i_th;
  return f_phi - mu * penalty;
}

Eigen::MatrixXcd euclidean_gradient(const ChannelRealization& chan, const RisState& ris,
                                    GainMode gmode, double p_s, double mu,
                                    const LinkBudget& budget) {
  if (gmode == GainMode::FeedVector) {
    const double denom = noise_plus_primary(chan.f, budget);
    const std::complex<double> s_h = chan.h.adjoint() * (ris.phi * ris.a);
    const std::complex<double> s_g = chan.g.adjoint() * (ris.phi * ris.a);
    Eigen::MatrixXcd grad = (p_s / denom) * s_h * (chan.h * ris.a.adjoint());
    if (mu != 0.0) {
      grad -= (mu * p_s) * s_g * (chan.g * ris.a.adjoint());
    }
    return grad;
  }
  // literal form; the lead constants follow the stated expression, not the
  // FeedVector chain rule
  const double c_h = 2.0 * p_s / std::numbers::ln2;
  Eigen::MatrixXcd grad = c_h * (chan.h.conjugate() * (chan.h.transpose() * ris.phi));
  if (mu != 0.0) {
    grad -= (2.0 * mu * p_s) * (chan.g.conjugate() * (chan.g.transpose() * ris.phi));
  }
  return grad;
}

Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& phi, const Eigen::MatrixXcd& grad) {
  const Eigen::MatrixXcd phg = phi.adjoint() * grad;
  const Eigen::MatrixXcd sym = 0.5 * (phg + phg.adjoint());
  return grad - phi * sym;
}

Eigen::MatrixXcd retract_svd(const Eigen::MatrixXcd& x) {
  const Eigen::Index m = x.rows();
  if (m < 1 || x.cols() != m) {
    throw std::invalid_argument("retract_svd: input must be square and non-empty");
  }

  // Polar factor from the Gram spectrum: X (X^H X)^{-1/2} = U V^H. Much
  // faster than a full SVD and accurate whenever X is well conditioned.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x.adjoint() * x);
  if (es.info() == Eigen::Success) {
    const Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const double smax = sv(m - 1);
    if (smax > 0.0 && sv(0) > kPolarConditionFloor * smax) {
      return x * (es.eigenvectors() * sv.cwiseInverse().asDiagonal() *
                  es.eigenvectors().adjoint());
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(m - 1) > 1e-12 * s(0))) {
    throw std::invalid_argument("retract_svd: rank-deficient input, nearest unitary undefined");
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::pair<RisState, PhaseTrace> riemannian_ascend(const ChannelRealization& chan,
                                                  const RisState& ris0, GainMode gmode,
                                                  double p_s, const LinkBudget& budget,
                                                  const ManifoldStepConfig& cfg) {
  cfg.check();
  budget.check();

  RisState ris = ris0;
  ris.mode = RisMode::BD;  // the iterates walk the full unitary manifold
  double mu = cfg.mu0;

  const auto violation_of = [&](const RisState& r) {
    return std::max(0.0, effective_gain(chan.g, r, gmode) * p_s - budget.i_th);
  };

  PhaseTrace trace;
  double objective = lagrangian_value(chan, ris, gmode, p_s, mu, budget);
  trace.iterates.push_back({0, objective, violation_of(ris), 0.0});

  double eta_start = cfg.eta0;
  double last_delta = 0.0;
  for (int k = 1; k <= cfg.max_inner; ++k) {
    const Eigen::MatrixXcd grad = euclidean_gradient(chan, ris, gmode, p_s, mu, budget);
    const Eigen::MatrixXcd dir = tangent_project(ris.phi, grad);
    const double slope = 2.0 * dir.squaredNorm();  // directional derivative along dir
    if (!(slope > 0.0)) {
      trace.converged = true;
      trace.final_delta = 0.0;
      return {ris, trace};
    }

    double eta = eta_start;
    bool accepted = false;
    Eigen::MatrixXcd phi_next;
    double obj_next = objective;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      phi_next = retract_svd(ris.phi + eta * dir);
      RisState cand = ris;
      cand.phi = phi_next;
      obj_next = lagrangian_value(chan, cand, gmode, p_s, mu, budget);
      if (obj_next >= objective + cfg.armijo_slope * eta * slope) {
        accepted = true;
        break;
      }
      eta *= cfg.armijo_shrink;
    }
    if (!accepted) {
      // no ascent step at numerical resolution
      trace.converged = true;
      trace.final_delta = 0.0;
      return {ris, trace};
    }

    const double delta = (phi_next - ris.phi).norm();
    if (delta < cfg.epsilon) {
      trace.converged = true;
      trace.final_delta = delta;
      return {ris, trace};
    }

    ris.phi = std::move(phi_next);
    objective = obj_next;
    last_delta = delta;
    eta_start = eta / cfg.armijo_shrink;  // warm restart one notch above the accepted step

    if (cfg.rho > 0.0) {
      const double slack = effective_gain(chan.g, ris, gmode) * p_s - budget.i_th;
      mu = std::max(0.0, mu + cfg.rho * slack);
      objective = lagrangian_value(chan, ris, gmode, p_s, mu, budget);
    }
    trace.iterates.push_back({k, objective, violation_of(ris), eta});
  }

  trace.converged = false;
  trace.final_delta = last_delta;
  return {ris, trace};
}

RisState dris_baseline(const Eigen::VectorXcd& h, const Eigen::VectorXcd& a) {
  const Eigen::Index m = h.size();
  if (a.size() != m) throw std::invalid_argument("dris_baseline: h and a lengths differ");

  RisState ris;
  ris.mode = RisMode::D;
  ris.a = a;
  ris.phi = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::complex<double> w = std::conj(h(i)) * a(i);
    const double phase = (w == std::complex<double>(0.0, 0.0)) ? 0.0 : std::arg(w);
    ris.phi(i, i) = std::complex<double>(std::cos(phase), -std::sin(phase));
  }
  return ris;
}

}  // namespace bdris
