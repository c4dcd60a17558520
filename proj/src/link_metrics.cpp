#include "bdris/link_metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bdris {

RisState RisState::bd_identity(int m) {
  RisState ris;
  ris.mode = RisMode::BD;
  ris.phi = Eigen::MatrixXcd::Identity(m, m);
  ris.a = uniform_feed(m);
  return ris;
}

void RisState::check(double unitary_tol) const {
  const Eigen::Index m = a.size();
  if (m < 1 || phi.rows() != m || phi.cols() != m) {
    throw std::invalid_argument("RisState: Phi must be M x M with M = feed length >= 1");
  }
  if (std::abs(a.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("RisState: feed vector must have unit norm");
  }
  if (mode == RisMode::BD) {
    const double dev = (phi * phi.adjoint() - Eigen::MatrixXcd::Identity(m, m)).norm();
    if (!(dev < unitary_tol)) {
      throw std::invalid_argument("RisState: BD phase matrix is not unitary");
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i == j) {
          if (std::abs(std::abs(phi(i, i)) - 1.0) > 1e-12) {
            throw std::invalid_argument("RisState: D diagonal entries must have unit modulus");
          }
        } else if (phi(i, j) != std::complex<double>(0.0, 0.0)) {
          throw std::invalid_argument("RisState: D phase matrix must be diagonal");
        }
      }
    }
  }
}

Eigen::VectorXcd uniform_feed(int m) {
  if (m < 1) throw std::invalid_argument("uniform_feed: m must be >= 1");
  return Eigen::VectorXcd::Constant(m, std::complex<double>(1.0 / std::sqrt(double(m)), 0.0));
}

void LinkBudget::check() const {
  if (!(p_max > 0.0) || !(q_p > 0.0) || !(sigma2 > 0.0) || !(i_th >= 0.0)) {
    throw std::invalid_argument(
        "LinkBudget: p_max, q_p, sigma2 must be positive and i_th non-negative");
  }
}

double noise_plus_primary(std::complex<double> f, const LinkBudget& budget) {
  return budget.sigma2 + std::norm(f) * budget.q_p;
}

double effective_gain(const Eigen::VectorXcd& v, const RisState& ris, GainMode gmode) {
  if (v.size() != ris.phi.rows()) {
    throw std::invalid_argument("effective_gain: channel length does not match RIS size");
  }
  if (gmode == GainMode::FeedVector) {
    const std::complex<double> s = v.adjoint() * (ris.phi * ris.a);
    return std::norm(s);
  }
  return (v.transpose() * ris.phi).squaredNorm();
}

double sinr(double h_gain, double p_s, std::complex<double> f, const LinkBudget& budget) {
  return h_gain * p_s / noise_plus_primary(f, budget);
}

double spectral_efficiency(double gamma) { return std::log2(1.0 + gamma); }

double pu_interference(const Eigen::VectorXcd& g, const RisState& ris, GainMode gmode,
                       double p_s) {
  return effective_gain(g, ris, gmode) * p_s;
}

}  // namespace bdris
