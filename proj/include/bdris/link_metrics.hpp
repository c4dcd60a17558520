#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bdris {

enum class RisMode { BD, D };

// Interpretation of the through-RIS channel gain.
//   FeedVector:       |v^H Phi a|^2 with a fixed unit-norm feed vector a.
//   PaperLiteralNorm: ||v^T Phi||^2, which is constant over unitary Phi;
//                     kept for the degeneracy regression tests.
enum class GainMode { FeedVector, PaperLiteralNorm };

struct RisState {
  RisMode mode = RisMode::BD;
  Eigen::MatrixXcd phi;  // M x M phase-shift matrix
  Eigen::VectorXcd a;    // unit-norm feed vector

  int elements() const { return static_cast<int>(a.size()); }

  // Phi = I with the uniform feed vector.
  static RisState bd_identity(int m);

  // Throws std::invalid_argument when the mode's constraint set is violated:
  // BD requires ||Phi Phi^H - I||_F < unitary_tol, D requires a unit-modulus
  // diagonal; both require ||a|| = 1.
  void check(double unitary_tol = 1e-8) const;
};

// (1/sqrt(M)) * [1, ..., 1]
Eigen::VectorXcd uniform_feed(int m);

// Power and interference parameters, all in watts.
struct LinkBudget {
  double p_max = 1.0;
  double q_p = 10.0;
  double sigma2 = 1e-9;
  double i_th = 0.1;

  void check() const;  // throws std::invalid_argument
};

// sigma^2 + |f|^2 Q_p, the SINR denominator shared with the phase subproblem.
double noise_plus_primary(std::complex<double> f, const LinkBudget& budget);

double effective_gain(const Eigen::VectorXcd& v, const RisState& ris, GainMode gmode);

double sinr(double h_gain, double p_s, std::complex<double> f, const LinkBudget& budget);

// log2(1 + gamma) in bits/s/Hz
double spectral_efficiency(double gamma);

double pu_interference(const Eigen::VectorXcd& g, const RisState& ris, GainMode gmode,
                       double p_s);

}  // namespace bdris
