#pragma once

#include <cstdint>
#include <random>

namespace semtensor {

// Seeded generator with distribution code written out here, so draws are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n); n > 0.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; used by tests and synthetic data.
  double Normal();

 private:
  std::mt19937_64 engine_;
};

// Derives independent stream seeds from one base seed.
std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace semtensor
