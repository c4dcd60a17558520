#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "bdris/rng.hpp"

namespace bdris {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Planar-array geometry for the deterministic LoS steering component.
struct GeometryParams {
  int mx = 1;           // elements along the x-axis
  int my = 1;           // elements along the y-axis
  double theta = 0.0;   // elevation [rad]
  double varphi = 0.0;  // azimuth [rad]
  double f_c = 2.0e9;   // carrier frequency [Hz]
  double q = 0.0;       // adjacent-element spacing [m]; <= 0 means half wavelength

  int elements() const { return mx * my; }
  double spacing() const { return q > 0.0 ? q : kSpeedOfLight / (2.0 * f_c); }
};

// Large-scale and small-scale fading parameters of one Rician link.
struct RicianParams {
  double k_factor = 10.0;  // LoS-to-NLoS power ratio, >= 0
  double h_hat = 1.0;      // channel power gain, >= 0
  double d = 1.0;          // transmitter-receiver distance [m], > 0

  double amplitude_scale() const { return std::sqrt(h_hat) / d; }
};

// One draw of the three links the solver consumes.
struct ChannelRealization {
  Eigen::VectorXcd h;      // ST -> SU
  Eigen::VectorXcd g;      // ST -> PU
  std::complex<double> f;  // PT -> SU
};

// delta = 2*pi*f_c*q / c. Throws std::invalid_argument on non-positive input.
double delta_of(double f_c, double q);

// Kronecker product of the x-axis phase ramp with the y-axis ramp; every
// entry has unit modulus. Length = mx*my.
Eigen::VectorXcd los_steering(const GeometryParams& geom);

// sqrt(h_hat/d^2) * ( sqrt(K/(K+1)) h_los + sqrt(1/(K+1)) h_nlos ) with
// iid CN(0,1) NLoS entries drawn from the stream.
Eigen::VectorXcd rician_draw(const GeometryParams& geom, const RicianParams& ric,
                             RandomStream& stream);

// Single-element Rician draw; the LoS component is 1.
std::complex<double> scalar_rician_draw(const RicianParams& ric, RandomStream& stream);

// Per-link channel settings for whole-trial draws.
struct SceneParams {
  int mx = 4;
  int my = 8;
  double f_c = 2.0e9;
  double q = 0.0;  // <= 0 means half wavelength
  RicianParams ric_h;
  RicianParams ric_g;
  RicianParams ric_f;

  int elements() const { return mx * my; }
};

// Draws (h, g, f) for one Monte Carlo trial. Elevation/azimuth are drawn
// uniformly from [0, pi/2] x [0, 2pi) per link and per trial; each link
// consumes its own stream seeded by derive_seed(master_seed, trial, tag).
ChannelRealization draw_channel(const SceneParams& scene, std::uint64_t master_seed,
                                std::uint64_t trial);

}  // namespace bdris
