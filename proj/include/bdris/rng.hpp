#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace bdris {

// SplitMix64 finalizer, used as the integer mixing function for sub-seed
// derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class LinkTag : std::uint64_t { StSu = 1, StPu = 2, PtSu = 3 };

// Sub-seed for one (trial, link) pair:
//   mix64(mix64(mix64(master) ^ trial) ^ tag)
// Each trial/link owns an independent stream, so trials can run on any
// worker without affecting reproducibility.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial, LinkTag link) {
  return mix64(mix64(mix64(master_seed) ^ trial) ^ static_cast<std::uint64_t>(link));
}

// Deterministic variate stream: mt19937_64 plus an explicit Box-Muller
// transform. Both are fully pinned down, so a seed reproduces the same
// sequence on every platform and standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  // circularly symmetric CN(0, 1): real/imag parts each N(0, 1/2)
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    constexpr double half = 0.70710678118654752440;  // 1/sqrt(2)
    return {re * half, im * half};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bdris
