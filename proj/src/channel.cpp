#include "bdris/channel.hpp"

#include <numbers>
#include <stdexcept>

namespace bdris {

double delta_of(double f_c, double q) {
  if (!(f_c > 0.0) || !(q > 0.0)) {
    throw std::invalid_argument("delta_of: carrier frequency and spacing must be positive");
  }
  return 2.0 * std::numbers::pi * f_c * q / kSpeedOfLight;
}

Eigen::VectorXcd los_steering(const GeometryParams& geom) {
  if (geom.mx < 1 || geom.my < 1) {
    throw std::invalid_argument("los_steering: element counts must be >= 1");
  }
  if (!std::isfinite(geom.theta) || !std::isfinite(geom.varphi)) {
    throw std::invalid_argument("los_steering: angles must be finite");
  }
  const double delta = delta_of(geom.f_c, geom.spacing());
  const double phase_x = delta * std::sin(geom.theta) * std::cos(geom.varphi);
  const double phase_y = delta * std::sin(geom.theta) * std::sin(geom.varphi);

  Eigen::VectorXcd v(geom.elements());
  for (int ix = 0; ix < geom.mx; ++ix) {
    for (int iy = 0; iy < geom.my; ++iy) {
      const double phase = phase_x * ix + phase_y * iy;
      v(ix * geom.my + iy) = std::complex<double>(std::cos(phase), -std::sin(phase));
    }
  }
  return v;
}

Eigen::VectorXcd rician_draw(const GeometryParams& geom, const RicianParams& ric,
                             RandomStream& stream) {
  const Eigen::VectorXcd los = los_steering(geom);
  Eigen::VectorXcd nlos(los.size());
  for (Eigen::Index i = 0; i < nlos.size(); ++i) {
    nlos(i) = stream.cnormal();
  }
  const double k = ric.k_factor;
  const double w_los = std::sqrt(k / (k + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k + 1.0));
  return ric.amplitude_scale() * (w_los * los + w_nlos * nlos);
}

std::complex<double> scalar_rician_draw(const RicianParams& ric, RandomStream& stream) {
  const double k = ric.k_factor;
  const double w_los = std::sqrt(k / (k + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k + 1.0));
  return ric.amplitude_scale() * (w_los + w_nlos * stream.cnormal());
}

ChannelRealization draw_channel(const SceneParams& scene, std::uint64_t master_seed,
                                std::uint64_t trial) {
  const auto draw_link = [&](LinkTag tag, const RicianParams& ric) {
    RandomStream stream(derive_seed(master_seed, trial, tag));
    GeometryParams geom;
    geom.mx = scene.mx;
    geom.my = scene.my;
    geom.f_c = scene.f_c;
    geom.q = scene.q;
    geom.theta = stream.uniform() * (std::numbers::pi / 2.0);
    geom.varphi = stream.uniform() * (2.0 * std::numbers::pi);
    return rician_draw(geom, ric, stream);
  };

  ChannelRealization chan;
  chan.h = draw_link(LinkTag::StSu, scene.ric_h);
  chan.g = draw_link(LinkTag::StPu, scene.ric_g);
  RandomStream stream_f(derive_seed(master_seed, trial, LinkTag::PtSu));
  chan.f = scalar_rician_draw(scene.ric_f, stream_f);
  return chan;
}

}  // namespace bdris
