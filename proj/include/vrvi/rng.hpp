// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_RNG_HPP_
#define VRVI_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "vrvi/core.hpp"

namespace vrvi {

// Counter-based generator (SplitMix64 output function over key + counter).
// A (seed, stream) pair fully determines the sequence, so independent streams
// for index draws, refresh coins, and noise are reproducible in isolation.
// std::* distributions are implementation-defined and would break replay
// guarantees, hence the hand-rolled uniform/normal transforms.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Vector gaussian(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Uniform on the unit sphere S^{n-1}; n=1 degenerates to ±1.
  Vector sphere(int n) {
    if (n == 1) {
      Vector v(1);
      v[0] = coin(0.5) ? 1.0 : -1.0;
      return v;
    }
    for (;;) {
      Vector g = gaussian(n);
      double nrm = g.norm();
      if (nrm > 1e-12) return g / nrm;
    }
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0;
  bool has_spare_ = false;
};

// Fixed stream ids so solver replays are stable; see SavrepState.
namespace stream {
constexpr std::uint64_t kHIndex = 0;
constexpr std::uint64_t kGIndex = 1;
constexpr std::uint64_t kHCoin = 2;
constexpr std::uint64_t kGCoin = 3;
constexpr std::uint64_t kHNoise = 4;
constexpr std::uint64_t kGNoise = 5;
constexpr std::uint64_t kComponent = 6;  // component-internal randomness (zeroth-order)
constexpr std::uint64_t kInit = 7;       // starting points, misc
}  // namespace stream

}  // namespace vrvi

#endif  // VRVI_RNG_HPP_
