#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace region_carver {

struct MLDegreeBound {
  std::vector<int> degrees;
  int n = 0;
  std::int64_t bound = 0;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("ML degree bound overflows 64 bits");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("ML degree bound overflows 64 bits");
  return r;
}

// series *= 1 / (1 - c z), truncated
inline void divide_by_linear(std::vector<std::int64_t>& series, std::int64_t c) {
  for (std::size_t m = 1; m < series.size(); ++m) series[m] = checked_add(series[m], checked_mul(c, series[m - 1]));
}

}  // namespace detail

/// Coefficient of z^n in (1 - z)^n / ((1 - d_1 z) ... (1 - d_k z) (1 - 2z)),
/// expanded as an exact truncated power series.
inline MLDegreeBound ml_degree_bound(const std::vector<int>& degrees, int n) {
  if (n < 0) throw std::invalid_argument("dimension must be non-negative");
  for (int d : degrees)
    if (d <= 0) throw std::invalid_argument("degrees must be positive");
  std::vector<std::int64_t> series(static_cast<std::size_t>(n) + 1, 0);
  // (1 - z)^n via binomial coefficients with alternating signs
  std::int64_t binom = 1;
  for (int m = 0; m <= n; ++m) {
    series[static_cast<std::size_t>(m)] = (m % 2 == 0) ? binom : -binom;
    binom = binom * (n - m) / (m + 1);
  }
  for (int d : degrees) detail::divide_by_linear(series, d);
  detail::divide_by_linear(series, 2);
  return {degrees, n, series.back()};
}

}  // namespace region_carver
