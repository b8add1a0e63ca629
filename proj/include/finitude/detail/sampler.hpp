#pragma once

#include <cstdint>
#include <random>

#include "finitude/scalar.hpp"

namespace finitude::detail {

/// Seeded source of small exact scalars. Only the raw 64-bit engine output is
/// used (never std distributions), so sequences are identical on every
/// standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  bool coin(unsigned percent_true = 50) { return uniform(0, 99) < percent_true; }

  Rational small_rational(long max_num = 3, long max_den = 3) {
    return make_rational(uniform(-max_num, max_num), uniform(1, max_den));
  }

  Gaussian small_gaussian(bool real_only) {
    if (real_only) return Gaussian(small_rational());
    return Gaussian(small_rational(), small_rational());
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace finitude::detail
