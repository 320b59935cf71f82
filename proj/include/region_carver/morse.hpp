#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/compiled_polynomial.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/polynomial.hpp"
#include "region_carver/random.hpp"

namespace region_carver {

/// log g together with its gradient and (on request) Hessian at a real point.
struct LogGradient {
  double value = 0.0;
  RealVector grad;
  std::optional<Matrix<double>> hessian;
};

/// Default exponent rule: the smallest t with sum s_i d_i < 2t.
inline int default_t(std::span<const int> s, std::span<const int> degrees) {
  long sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += static_cast<long>(s[i]) * degrees[i];
  return static_cast<int>(sum / 2 + 1);
}

/// q(x) = sum_{j=1}^{n+1} l_j(x)^2 + 4 with Gaussian affine forms l_j.
inline Polynomial<double> random_positive_quadric(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Polynomial<double> q = Polynomial<double>::constant(n, 4.0);
  for (std::size_t j = 0; j <= n; ++j) {
    Polynomial<double> form = Polynomial<double>::constant(n, rng.normal());
    for (std::size_t i = 0; i < n; ++i) form += Polynomial<double>::variable(n, i) * rng.normal();
    q += form * form;
  }
  return q;
}

/// Checks that q has degree 2, a positive definite quadratic part and a
/// positive minimum on R^n.
inline bool is_positive_quadric(const Polynomial<double>& q) {
  const std::size_t n = q.nvars();
  if (q.degree() != 2) return n == 0 && q.degree() == 0 && q.coefficient(Monomial::one(0)) > 0;
  Matrix<double> a(n, n);
  RealVector b(n, 0.0);
  double c = 0.0;
  for (const auto& [m, coef] : q.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      for (int e = 0; e < m[i]; ++e) idx.push_back(i);
    if (idx.empty()) c = coef;
    else if (idx.size() == 1) b[idx[0]] = coef;
    else if (idx[0] == idx[1]) a(idx[0], idx[0]) = coef;
    else a(idx[0], idx[1]) = a(idx[1], idx[0]) = coef / 2.0;
  }
  const SymmetricEigen eig = jacobi_eigen(a);
  if (eig.values.front() <= 0.0) return false;
  // minimum value: c - b^T A^{-1} b / 4
  RealVector sol = b;
  if (!lu_solve(a, std::span<double>(sol))) return false;
  double btab = 0.0;
  for (std::size_t i = 0; i < n; ++i) btab += b[i] * sol[i];
  return c - btab / 4.0 > 0.0;
}

inline constexpr double kOnHypersurfaceFloor = 1e-12;

/// g(x) = prod |f_i(x)|^{s_i} / q(x)^t, evaluated through its logarithm.
class MorseFunction {
 public:
  MorseFunction(Arrangement arr, Polynomial<double> q, std::vector<int> s, int t, std::uint64_t seed = 0)
      : arr_(std::move(arr)), q_(std::move(q)), s_(std::move(s)), t_(t), seed_(seed) {
    if (arr_.polys.empty()) throw std::invalid_argument("empty arrangement");
    if (q_.nvars() != arr_.n) throw DimensionError("quadric lives in the wrong dimension");
    if (s_.size() != arr_.k()) throw std::invalid_argument("need one exponent s_i per polynomial");
    for (int si : s_)
      if (si <= 0) throw std::invalid_argument("exponents s_i must be positive");
    if (t_ <= 0) throw std::invalid_argument("exponent t must be positive");
    const auto d = arr_.degrees();
    long lhs = 0;
    for (std::size_t i = 0; i < d.size(); ++i) lhs += static_cast<long>(s_[i]) * d[i];
    if (lhs >= 2L * t_)
      throw std::invalid_argument("exponents violate sum s_i deg f_i < 2t (" + std::to_string(lhs) +
                                  " >= " + std::to_string(2L * t_) + ")");
    if (!is_positive_quadric(q_)) throw std::invalid_argument("q must be a quadric that is positive on R^n");
    compiled_.reserve(arr_.k());
    scales_.reserve(arr_.k());
    for (const auto& f : arr_.polys) {
      compiled_.emplace_back(f);
      scales_.push_back(f.max_abs_coefficient());
      max_exp_ = std::max(max_exp_, compiled_.back().max_exponent());
    }
    q_compiled_ = CompiledPolynomial(q_);
    max_exp_ = std::max(max_exp_, 2);
    degrees_ = d;
  }

  const Arrangement& arrangement() const noexcept { return arr_; }
  const Polynomial<double>& q() const noexcept { return q_; }
  const std::vector<int>& s() const noexcept { return s_; }
  int t() const noexcept { return t_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t n() const noexcept { return arr_.n; }
  std::size_t k() const noexcept { return arr_.k(); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int max_exponent() const noexcept { return max_exp_; }
  const CompiledPolynomial& compiled(std::size_t j) const { return compiled_[j]; }
  const CompiledPolynomial& compiled_q() const noexcept { return q_compiled_; }

  double floor(std::size_t j, double radius, double rel = kOnHypersurfaceFloor) const {
    return rel * scales_[j] * (1.0 + std::pow(radius, degrees_[j]));
  }

  /// Index of the first f_j that is numerically zero at x, or -1.
  int near_hypersurface(std::span<const double> x, double rel = kOnHypersurfaceFloor) const {
    PowerTable<double> pw(x, max_exp_);
    const double r = norm2(x);
    for (std::size_t j = 0; j < compiled_.size(); ++j)
      if (std::abs(compiled_[j].value(pw)) < floor(j, r, rel)) return static_cast<int>(j);
    return -1;
  }

  SignVector signs(std::span<const double> x, double rel = kOnHypersurfaceFloor) const {
    PowerTable<double> pw(x, max_exp_);
    const double r = norm2(x);
    std::vector<signed char> out(k());
    for (std::size_t j = 0; j < k(); ++j) {
      const double v = compiled_[j].value(pw);
      if (std::abs(v) < floor(j, r, rel))
        throw AmbiguousSignError("sign of f_" + std::to_string(j + 1) + " is ambiguous", j);
      out[j] = v > 0 ? 1 : -1;
    }
    return SignVector(std::move(out));
  }

  double log_value(std::span<const double> x) const { return evaluate(x, false).value; }

  /// value = sum s_i log|f_i| - t log q; grad and Hessian from the exact
  /// derivative formulas of the logarithm.
  LogGradient evaluate(std::span<const double> x, bool with_hessian = false) const {
    const std::size_t n = arr_.n;
    if (x.size() != n) throw DimensionError("point has wrong dimension");
    PowerTable<double> pw(x, max_exp_);
    const double r = norm2(x);
    LogGradient out;
    out.grad.assign(n, 0.0);
    std::vector<double> g(n), h(with_hessian ? n * n : 0);
    Matrix<double> hess;
    if (with_hessian) hess = Matrix<double>(n, n);

    auto accumulate = [&](double weight, double v) {
      out.value += weight * std::log(std::abs(v));
      for (std::size_t i = 0; i < n; ++i) out.grad[i] += weight * g[i] / v;
      if (with_hessian) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t l = 0; l < n; ++l) hess(i, l) += weight * (h[i * n + l] / v - g[i] * g[l] / (v * v));
      }
    };

    for (std::size_t j = 0; j < compiled_.size(); ++j) {
      const double v = with_hessian ? compiled_[j].value_gradient_hessian(pw, std::span<double>(g), std::span<double>(h))
                                    : compiled_[j].value_gradient(pw, std::span<double>(g));
      if (std::abs(v) < floor(j, r))
        throw OnHypersurfaceError("point lies on the hypersurface f_" + std::to_string(j + 1) + " = 0", j);
      accumulate(static_cast<double>(s_[j]), v);
    }
    const double qv = with_hessian ? q_compiled_.value_gradient_hessian(pw, std::span<double>(g), std::span<double>(h))
                                   : q_compiled_.value_gradient(pw, std::span<double>(g));
    accumulate(-static_cast<double>(t_), qv);
    if (with_hessian) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < i; ++l) hess(i, l) = hess(l, i) = 0.5 * (hess(i, l) + hess(l, i));
      out.hessian = std::move(hess);
    }
    return out;
  }

  LogGradient evaluate(const RealVector& x, bool with_hessian = false) const {
    return evaluate(std::span<const double>(x), with_hessian);
  }

 private:
  Arrangement arr_;
  Polynomial<double> q_;
  std::vector<int> s_;
  int t_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<CompiledPolynomial> compiled_;
  CompiledPolynomial q_compiled_;
  std::vector<double> scales_;
  std::vector<int> degrees_;
  int max_exp_ = 2;
};

/// Builds g for an arrangement: s defaults to all ones, t to
/// floor(sum s_i d_i / 2) + 1, and q is drawn from the seed.
inline MorseFunction build_morse_function(const Arrangement& arr, std::uint64_t seed,
                                          std::optional<std::vector<int>> s = std::nullopt,
                                          std::optional<int> t = std::nullopt) {
  if (arr.polys.empty()) throw std::invalid_argument("empty arrangement");
  std::vector<int> exps = s ? *s : std::vector<int>(arr.k(), 1);
  const auto d = arr.degrees();
  const int tt = t ? *t : default_t(exps, d);
  return MorseFunction(arr, random_positive_quadric(arr.n, seed), std::move(exps), tt, seed);
}

/// Same as build_morse_function but with a caller-chosen quadric.
inline MorseFunction build_morse_function_with_quadric(const Arrangement& arr, Polynomial<double> q,
                                                       std::optional<std::vector<int>> s = std::nullopt,
                                                       std::optional<int> t = std::nullopt) {
  std::vector<int> exps = s ? *s : std::vector<int>(arr.k(), 1);
  const int tt = t ? *t : default_t(exps, arr.degrees());
  return MorseFunction(arr, std::move(q), std::move(exps), tt, 0);
}

}  // namespace region_carver
