#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fksd {

// Splittable counter-style generator built on SplitMix64. Substreams are
// derived from (root seed, stream index) so parallel repetitions reproduce
// serial results exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

  // Independent stream for repetition / worker `stream`, derived from the
  // seed this Rng was constructed with (not from its current position).
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (pair cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Student-t with 2 degrees of freedom, by inverse CDF.
  double student_t2() {
    double a = 2.0 * uniform() - 1.0;
    return a * std::sqrt(2.0 / (1.0 - a * a));
  }

  double cauchy() { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace fksd
