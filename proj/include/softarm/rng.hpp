#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Seeded RNG with explicitly coded distributions so sampled experiment inputs
// are reproducible bit-for-bit from the seed alone.

namespace softarm {

struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  std::uint64_t next() { return engine(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Beta(a, b) for shape parameters <= 1 via Johnk's rejection method.
  double beta(double a, double b) {
    for (int guard = 0; guard < 10000; ++guard) {
      const double x = std::pow(uniform(), 1.0 / a);
      const double y = std::pow(uniform(), 1.0 / b);
      const double s = x + y;
      if (s > 0.0 && s <= 1.0) return x / s;
    }
    return 0.5;  // unreachable in practice
  }

  // Independent substream derived from a seed and a stream index (splitmix64).
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

}  // namespace softarm
