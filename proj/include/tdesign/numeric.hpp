#pragma once

#include <cmath>
#include <numbers>

namespace tdesign {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// binom(n, k) as a running product, so large n never overflows through
/// factorials.
inline double binomial(double n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b *= (n - k + i) / i;
  return b;
}

inline long double binomial_ld(long double n, int k) {
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) b *= (n - k + i) / i;
  return b;
}

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

}  // namespace tdesign
