#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dno {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash a (seed, index) pair to a uniform u64; used for seed derivation.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

/// xoshiro256** generator. Self-contained so that streams do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
    has_spare_ = false;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform point in the closed unit ball: gaussian direction, U^{1/d} radius.
  std::vector<double> ball_point(int d) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    for (auto& xi : x) {
      xi = gaussian();
      norm2 += xi * xi;
    }
    const double norm = std::sqrt(norm2);
    const double radius = std::pow(uniform(), 1.0 / static_cast<double>(d));
    const double scale = norm > 0.0 ? radius / norm : 0.0;
    for (auto& xi : x) xi *= scale;
    return x;
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_;
};

inline double radical_inverse(std::uint32_t base, std::uint64_t index) {
  double inv_base = 1.0 / base;
  double scale = inv_base;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return value;
}

/// First `count` Halton points (bases 2,3,5,...) inside the unit ball of R^d.
std::vector<std::vector<double>> halton_ball(int d, std::size_t count);

/// `count` Halton points on [a, b] (base 2).
std::vector<double> halton_interval(double a, double b, std::size_t count);

}  // namespace dno
