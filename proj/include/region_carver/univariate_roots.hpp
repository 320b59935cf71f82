#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "region_carver/errors.hpp"

namespace region_carver {

namespace detail {

// Value and derivative of sum a_k z^k by Horner.
inline std::pair<std::complex<double>, std::complex<double>> horner(std::span<const std::complex<double>> a,
                                                                    std::complex<double> z) {
  std::complex<double> p = a.back(), dp = 0.0;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

inline double horner_scale(std::span<const std::complex<double>> a, double r) {
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) s = s * r + std::abs(a[k]);
  return s;
}

}  // namespace detail

/// All complex roots of sum a_k t^k (constant term first) by Aberth-Ehrlich
/// simultaneous iteration. Repeated roots are returned with multiplicity.
inline std::vector<std::complex<double>> roots_of_univariate(std::span<const std::complex<double>> coeffs,
                                                             int max_sweeps = 200) {
  using C = std::complex<double>;
  double scale = 0.0;
  for (const C& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) throw std::invalid_argument("the zero polynomial has no finite root set");
  std::vector<C> a(coeffs.begin(), coeffs.end());
  while (!a.empty() && std::abs(a.back()) <= 1e-14 * scale) a.pop_back();
  // roots at zero
  std::size_t zeros = 0;
  while (zeros + 1 < a.size() && a[zeros] == C{}) ++zeros;
  std::vector<C> out(zeros, C{});
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(zeros));
  const std::size_t d = a.size() - 1;
  if (d == 0) return out;
  if (d == 1) {
    out.push_back(-a[0] / a[1]);
    return out;
  }

  // initial guesses on a circle of the geometric-mean root radius
  const double radius = std::pow(std::abs(a[0] / a[d]), 1.0 / static_cast<double>(d));
  std::vector<C> z(d);
  for (std::size_t i = 0; i < d; ++i)
    z[i] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d) + 0.4);
  std::vector<bool> done(d, false);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool all = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      const auto [p, dp] = detail::horner(a, z[i]);
      if (std::abs(p) <= 1e-15 * detail::horner_scale(a, std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      const C ratio = p / dp;
      C sum{};
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const C w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        z[i] += std::polar(1e-8 * (1.0 + std::abs(z[i])), 1.0 + static_cast<double>(i));
        all = false;
        continue;
      }
      z[i] -= w;
      if (std::abs(w) <= 1e-15 * (1.0 + std::abs(z[i]))) done[i] = true;
      else all = false;
    }
    if (all) break;
  }
  for (const C& r : z) {
    const auto [p, dp] = detail::horner(a, r);
    if (std::abs(p) > 1e-10 * detail::horner_scale(a, std::abs(r)))
      throw RootFindingError("Aberth iteration did not converge");
  }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

inline std::vector<std::complex<double>> roots_of_univariate(std::span<const double> coeffs, int max_sweeps = 200) {
  std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
  return roots_of_univariate(std::span<const std::complex<double>>(c), max_sweeps);
}

inline std::vector<std::complex<double>> roots_of_univariate(const std::vector<double>& coeffs, int max_sweeps = 200) {
  return roots_of_univariate(std::span<const double>(coeffs), max_sweeps);
}

}  // namespace region_carver
