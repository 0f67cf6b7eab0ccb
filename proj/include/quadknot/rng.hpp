#pragma once

// Counter-based random numbers. Everything randomized in the library is a
// pure function of (seed, index), so results do not depend on thread count
// or on the standard library's distribution implementations.

#include <cmath>
#include <cstdint>

#include "geom_core.hpp"

namespace quadknot {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t next() { return splitmix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL); }
  double uniform() { return unit_double(next()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform direction on the unit sphere (Archimedes: z uniform, angle uniform).
  Vec3 on_sphere() {
    const double z = uniform(-1.0, 1.0);
    const double phi = 2.0 * 3.14159265358979323846 * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  // Uniform point in the closed ball of the given radius, by rejection.
  Vec3 in_ball(double radius) {
    for (;;) {
      const Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (v.squared_norm() <= 1.0) return v * radius;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace quadknot
