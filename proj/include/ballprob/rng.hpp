#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace ballprob {

/// mt19937_64 with explicit uniform/normal mappings so that seeded streams
/// are identical across standard libraries (std::normal_distribution is
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return eng_(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Simple multiply-shift reduction; bias is ~n/2^64, irrelevant here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

  /// Standard normal via Box-Muller, one spare cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  void fill_normal(std::span<double> out) {
    for (double& v : out) v = normal();
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ballprob
