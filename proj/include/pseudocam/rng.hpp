#pragma once

#include <cmath>
#include <cstdint>

namespace pseudocam {

/// Small deterministic generator (splitmix64 core). Used everywhere randomness
/// is needed so that a seed reproduces bit-identical models, captures and masks
/// independently of platform library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (spare value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// N(0, 1) truncated to [-bound, bound], by rejection.
  double truncated_normal(double bound) {
    for (;;) {
      const double z = normal();
      if (z >= -bound && z <= bound) return z;
    }
  }

  /// Deterministic sub-stream for a given lane (e.g. one frame of a capture).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t lane) {
    SeededRng mix(seed ^ (0x632be59bd9b4e019ULL + lane * 0x9e3779b97f4a7c15ULL));
    return mix.next_u64();
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pseudocam
