#pragma once

#include <cmath>
#include <cstdint>

namespace fluidq {

// Counter-based splittable generator. A stream is identified by
// (seed, replication, role) and produces its outputs by hashing successive
// counter values, so streams can be created in any order, consumed lazily and
// merged deterministically across threads.
enum class StreamRole : std::uint64_t {
  Gaussian = 1,
  Poisson = 2,
  Stable = 3,
  Marks = 4,
  Inspection = 5,
  Calibration = 6,
};

namespace detail {

// splitmix64 output function.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replication, StreamRole role)
      : key_(detail::mix64(detail::mix64(detail::mix64(seed) + replication) +
                           static_cast<std::uint64_t>(role))) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  // Uniform on (0,1), never returning 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exp() { return -std::log(next_unit()); }

  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_unit()));
    const double a = 2.0 * M_PI * next_unit();
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Inversion sampler; intended for small means (per-cell jump counts).
  unsigned next_poisson(double mean) {
    const double u = next_unit();
    double p = std::exp(-mean);
    double cdf = p;
    unsigned k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / k;
      cdf += p;
    }
    return k;
  }

  // Positive alpha-stable with Laplace transform exp(-lambda^alpha)
  // (Kanter's representation), alpha in (0,1).
  double next_stable(double alpha) {
    const double u = M_PI * next_unit();
    const double e = next_exp();
    const double s = std::sin(u);
    const double a1 = std::sin(alpha * u) / std::pow(s, 1.0 / alpha);
    const double a2 = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
    return a1 * a2;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace fluidq
