#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "region_carver/polynomial.hpp"

namespace region_carver {

/// Powers x_i^e for every coordinate, shared by all polynomials evaluated at
/// the same point.
template <class T>
class PowerTable {
 public:
  PowerTable() = default;
  PowerTable(std::span<const T> x, int max_exponent) { assign(x, max_exponent); }

  void assign(std::span<const T> x, int max_exponent) {
    n_ = x.size();
    stride_ = static_cast<std::size_t>(std::max(max_exponent, 1)) + 1;
    table_.resize(n_ * stride_);
    for (std::size_t i = 0; i < n_; ++i) {
      T* row = table_.data() + i * stride_;
      row[0] = T{1};
      for (std::size_t e = 1; e < stride_; ++e) row[e] = row[e - 1] * x[i];
    }
  }

  const T& operator()(std::size_t i, int e) const { return table_[i * stride_ + static_cast<std::size_t>(e)]; }
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_ = 0;
  std::size_t stride_ = 1;
  std::vector<T> table_;
};

/// Flattened real polynomial for repeated evaluation of value, gradient and
/// Hessian at real or complex points.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;

  explicit CompiledPolynomial(const Polynomial<double>& p) : nvars_(p.nvars()) {
    exps_.reserve(p.size() * nvars_);
    coefs_.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
      coefs_.push_back(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        exps_.push_back(m[i]);
        max_exp_ = std::max(max_exp_, m[i]);
      }
    }
    degree_ = p.is_zero() ? 0 : p.degree().value();
  }

  std::size_t nvars() const noexcept { return nvars_; }
  int max_exponent() const noexcept { return max_exp_; }
  int degree() const noexcept { return degree_; }
  std::size_t terms() const noexcept { return coefs_.size(); }

  template <class T>
  T value(const PowerTable<T>& pw) const {
    T sum{};
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
      const int* e = exps_.data() + t * nvars_;
      T v = T(coefs_[t]);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) v *= pw(i, e[i]);
      sum += v;
    }
    return sum;
  }

  /// Value and gradient; grad must hold nvars() entries.
  template <class T>
  T value_gradient(const PowerTable<T>& pw, std::span<T> grad) const {
    std::fill(grad.begin(), grad.end(), T{});
    T sum{};
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
      const int* e = exps_.data() + t * nvars_;
      T v = T(coefs_[t]);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) v *= pw(i, e[i]);
      sum += v;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        T d = T(coefs_[t] * e[i]);
        for (std::size_t j = 0; j < nvars_; ++j) {
          const int ej = j == i ? e[j] - 1 : e[j];
          if (ej) d *= pw(j, ej);
        }
        grad[i] += d;
      }
    }
    return sum;
  }

  /// Value, gradient and the full row-major Hessian (nvars()^2 entries).
  template <class T>
  T value_gradient_hessian(const PowerTable<T>& pw, std::span<T> grad, std::span<T> hess) const {
    const T v = value_gradient(pw, grad);
    std::fill(hess.begin(), hess.end(), T{});
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
      const int* e = exps_.data() + t * nvars_;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        for (std::size_t l = i; l < nvars_; ++l) {
          const double factor = l == i ? double(e[i]) * (e[i] - 1) : double(e[i]) * e[l];
          if (factor == 0.0) continue;
          T d = T(coefs_[t] * factor);
          for (std::size_t j = 0; j < nvars_; ++j) {
            const int ej = e[j] - (j == i) - (j == l);
            if (ej) d *= pw(j, ej);
          }
          hess[i * nvars_ + l] += d;
        }
      }
    }
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::size_t l = 0; l < i; ++l) hess[i * nvars_ + l] = hess[l * nvars_ + i];
    return v;
  }

 private:
  std::size_t nvars_ = 0;
  int max_exp_ = 0;
  int degree_ = 0;
  std::vector<int> exps_;
  std::vector<double> coefs_;
};

}  // namespace region_carver
