#pragma once

// Portable draws on top of std::mt19937_64. The standard distributions are
// implementation-defined, so results would differ between toolchains.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace magtorus {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }

  // [0, n)
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % n;
  }

  double normal() {
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  bool coin() { return (eng_() >> 63) != 0; }

  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Reduce to [0, 2*pi).
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

// Signed representative in (-pi, pi].
inline double centered_angle(double a) {
  double r = wrap_angle(a);
  if (r > std::numbers::pi) r -= 2.0 * std::numbers::pi;
  return r;
}

}  // namespace magtorus
