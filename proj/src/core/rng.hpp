#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include "core/image.hpp"

namespace lexstereo {

// Counter-style splittable generator (splitmix64). Streams derived from a
// key tuple are statistically independent, which is what makes parallel and
// serial optimizer schedules produce identical results.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Derives a stream seed from a base seed and a key tuple.
  static uint64_t derive(uint64_t base, std::initializer_list<uint64_t> key) {
    uint64_t h = mix(base ^ 0x51c64f59d384a2d1ull);
    for (uint64_t k : key) h = mix(h ^ k);
    return h;
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

  // Uniform direction on the unit sphere.
  Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(t), r * std::sin(t), z};
  }

private:
  uint64_t state_;
};

}  // namespace lexstereo
