#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qga {

// Counter-based pseudo-random stream (splitmix64). The k-th output is a hash
// of seed + k*gamma, so a stream is fully determined by its seed, and
// independent substreams can be derived by key without sharing any state.
// One stream is owned by exactly one consumer; streams are cheap to copy.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), counter_(0) {}

  std::uint64_t next_u64() {
    counter_ += kGamma;
    return mix(seed_ + counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second member of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925287 * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
  }

  // Complex standard normal (unit variance per component), as used for
  // Ginibre matrices.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  // Index into [0, bound) by rejection-free multiply-shift; bound must fit
  // comfortably below 2^32 for negligible bias (we only use small bounds).
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  // Independent stream addressed by (this stream's seed, key).
  RngStream substream(std::uint64_t key) const {
    return RngStream(mix(seed_ ^ mix(key + kGamma)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qga
