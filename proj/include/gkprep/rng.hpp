// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace gkpr {

/// SplitMix64 generator. Streams are derived from (seed, stream index) so that
/// parallel trials draw identical numbers regardless of scheduling. All
/// transforms are written out here rather than taken from <random>
/// distributions, whose output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on (0, 1] with 53 random bits.
  double uniform_open_closed() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Number of attempts up to and including the first success.
  long geometric(double p) {
    if (p >= 1.0) return 1;
    const double u = uniform_open_closed();
    return 1 + static_cast<long>(std::floor(std::log(u) / std::log1p(-p)));
  }

  std::uint64_t state() const { return state_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace gkpr
