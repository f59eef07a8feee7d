#ifndef LANDBAYES_RNG_HPP_
#define LANDBAYES_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace landbayes {

// Every random draw in the library comes from an Rng built from a
// (seed, label) pair. The engine is std::mt19937_64, seeded with
// splitmix64(seed XOR fnv1a64(label)). The distributions below are written
// out by hand instead of using <random>'s distributions, whose output is
// implementation-defined, so that draws match across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view label)
      : engine_(derive_seed(seed, label)) {}

  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : label) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 0x100000001b3ULL;
    }
    std::uint64_t z = seed ^ hash;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  // Box-Muller; one variate per call, the partner is discarded.
  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace landbayes

#endif  // LANDBAYES_RNG_HPP_
