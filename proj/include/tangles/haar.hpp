#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tangles/ket.hpp"

namespace tangles {

// Counter-based SplitMix64 stream. Sampling point i of stream (seed, index)
// never touches any other point, so parallel workers can draw disjoint chunks
// and reproduce the single-threaded sequence exactly.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0)
      : state_(mix(seed) ^ mix(index * 0x9e3779b97f4a7c15ull + 0xd1b54a32d192ed03ull)) {}

  std::uint64_t next_bits() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double u01() { return static_cast<double>((next_bits() >> 11) + 1) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = u01();
    const double v = u01();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx gaussian_cplx() { return {gaussian(), gaussian()}; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Haar-random pure state on n qubits: normalized vector of iid complex normals.
inline Ket haar_random_ket(int n, std::uint64_t seed, std::uint64_t index = 0) {
  if (n < 1 || n > kMaxParties) throw std::invalid_argument("haar_random_ket: party count outside [1,12]");
  RandomStream rng(seed, index);
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) a = rng.gaussian_cplx();
  return normalized(make_ket(n, amps));
}

}  // namespace tangles
