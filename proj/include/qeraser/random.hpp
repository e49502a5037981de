// random.hpp
// Deterministic, platform-independent random source. All randomness in the
// library derives from a single 64-bit seed through a fixed splitting rule,
// so reruns and any parallel schedule reproduce the same numbers.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qeraser/common.hpp"

namespace qeraser {

// splitmix64; the reference recurrence from Vigna's public-domain code.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (one value per call; the pair's second
  // member is discarded to keep the stream position independent of usage).
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  cplx next_complex_normal() { return cplx(next_normal(), next_normal()); }

  // Child stream for an independent task; the fixed splitting rule.
  SplitMix64 split(std::uint64_t stream_id) {
    SplitMix64 chi(state_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
    chi.next_u64();
    return chi;
  }

 private:
  std::uint64_t state_;
};

}  // namespace qeraser
