#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "region_carver/compiled_polynomial.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/polynomial.hpp"

namespace region_carver {

/// grad log g = 0 with denominators cleared: equation i is
/// (q prod f_j) * (sum_j s_j d_i f_j / f_j - t d_i q / q), expanded.
struct CriticalSystem {
  std::vector<Polynomial<double>> equations;
  std::int64_t bezout = 1;
  MorseFunction source;
};

inline CriticalSystem assemble_critical_system(const MorseFunction& m) {
  const std::size_t n = m.n();
  const auto& f = m.arrangement().polys;
  const std::size_t k = f.size();
  // factors: f_1..f_k, q ; cofactor_j = product of all other factors
  std::vector<Polynomial<double>> factors(f.begin(), f.end());
  factors.push_back(m.q());
  const std::size_t kk = factors.size();
  std::vector<Polynomial<double>> prefix(kk + 1, Polynomial<double>::constant(n, 1.0));
  std::vector<Polynomial<double>> suffix(kk + 1, Polynomial<double>::constant(n, 1.0));
  for (std::size_t j = 0; j < kk; ++j) prefix[j + 1] = prefix[j] * factors[j];
  for (std::size_t j = kk; j-- > 0;) suffix[j] = suffix[j + 1] * factors[j];

  CriticalSystem cs{{}, 1, m};
  cs.equations.assign(n, Polynomial<double>(n));
  for (std::size_t j = 0; j < kk; ++j) {
    const Polynomial<double> cofactor = prefix[j] * suffix[j + 1];
    const double w = j < k ? static_cast<double>(m.s()[j]) : -static_cast<double>(m.t());
    for (std::size_t i = 0; i < n; ++i) cs.equations[i] += differentiate(factors[j], i) * cofactor * w;
  }
  for (const auto& e : cs.equations) {
    const std::int64_t d = e.is_zero() ? 0 : e.degree().value();
    cs.bezout *= d;
  }
  return cs;
}

/// Evaluates the homogenized cleared system and its Jacobian from the factors
/// f_j and q without expanding products. Homogeneous coordinates are
/// X = (X_0, X_1, ..., X_n); equation i uses derivatives in X_i, i >= 1.
class ClearedSystemEvaluator {
 public:
  using C = std::complex<double>;

  explicit ClearedSystemEvaluator(const MorseFunction& m) : n_(m.n()) {
    int d = 1;
    for (std::size_t j = 0; j < m.k(); ++j) {
      factors_.emplace_back(homogenize(m.arrangement().polys[j]));
      weights_.push_back(static_cast<double>(m.s()[j]));
      d += m.degrees()[j];
    }
    factors_.emplace_back(homogenize(m.q()));
    weights_.push_back(-static_cast<double>(m.t()));
    for (const auto& c : factors_) max_exp_ = std::max(max_exp_, c.max_exponent());
    degrees_.assign(n_, d);
  }

  /// Uses the factored form unless cancellation lowered the degree of some
  /// expanded equation, in which case the expanded equations are evaluated.
  explicit ClearedSystemEvaluator(const CriticalSystem& cs) : ClearedSystemEvaluator(cs.source) {
    bool drop = false;
    for (const auto& e : cs.equations) drop |= e.is_zero() || e.degree() < degrees_.front();
    if (!drop) return;
    expanded_ = true;
    degrees_.clear();
    for (const auto& e : cs.equations) {
      equations_.emplace_back(homogenize(e));
      degrees_.push_back(e.is_zero() ? 0 : e.degree().value());
      max_exp_ = std::max(max_exp_, equations_.back().max_exponent());
    }
  }

  std::size_t n() const noexcept { return n_; }
  /// Degree of each homogenized equation.
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  bool expanded() const noexcept { return expanded_; }

  /// values: n entries; jac (if given): n x (n+1).
  void evaluate(std::span<const C> X, std::span<C> values, Matrix<C>* jac) const {
    const std::size_t N = n_ + 1;
    PowerTable<C> pw(X, max_exp_);
    if (expanded_) {
      std::vector<C> g(N);
      for (std::size_t i = 0; i < n_; ++i) {
        values[i] = equations_[i].value_gradient(pw, std::span<C>(g));
        if (jac)
          for (std::size_t mm = 0; mm < N; ++mm) (*jac)(i, mm) = g[mm];
      }
      return;
    }
    const std::size_t K = factors_.size();
    std::vector<C> phi(K), grad(K * N), hess(jac ? K * N * N : 0);
    for (std::size_t j = 0; j < K; ++j) {
      std::span<C> g(grad.data() + j * N, N);
      phi[j] = jac ? factors_[j].value_gradient_hessian(pw, g, std::span<C>(hess.data() + j * N * N, N * N))
                   : factors_[j].value_gradient(pw, g);
    }
    // E_j = prod_{l != j} phi_l
    std::vector<C> pre(K + 1, C{1}), suf(K + 1, C{1}), excl(K);
    for (std::size_t j = 0; j < K; ++j) pre[j + 1] = pre[j] * phi[j];
    for (std::size_t j = K; j-- > 0;) suf[j] = suf[j + 1] * phi[j];
    for (std::size_t j = 0; j < K; ++j) excl[j] = pre[j] * suf[j + 1];

    for (std::size_t i = 0; i < n_; ++i) {
      C s{};
      for (std::size_t j = 0; j < K; ++j) s += weights_[j] * grad[j * N + i + 1] * excl[j];
      values[i] = s;
    }
    if (!jac) return;

    // A(m, j) = sum_{l != j} d_m phi_l * prod_{r != j, l} phi_r
    std::vector<C> a(N * K, C{});
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t l = 0; l < K; ++l) {
        if (l == j) continue;
        C prod{1};
        for (std::size_t r = 0; r < K; ++r)
          if (r != j && r != l) prod *= phi[r];
        for (std::size_t mm = 0; mm < N; ++mm) a[mm * K + j] += grad[l * N + mm] * prod;
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t xi = i + 1;
      for (std::size_t mm = 0; mm < N; ++mm) {
        C s{};
        for (std::size_t j = 0; j < K; ++j)
          s += weights_[j] * (hess[j * N * N + xi * N + mm] * excl[j] + grad[j * N + xi] * a[mm * K + j]);
        (*jac)(i, mm) = s;
      }
    }
  }

  /// Affine evaluation at x (X_0 = 1); jac is n x n.
  void evaluate_affine(std::span<const C> x, std::span<C> values, Matrix<C>* jac) const {
    std::vector<C> X(n_ + 1);
    X[0] = C{1};
    std::copy(x.begin(), x.end(), X.begin() + 1);
    if (!jac) {
      evaluate(X, values, nullptr);
      return;
    }
    Matrix<C> full(n_, n_ + 1);
    evaluate(X, values, &full);
    *jac = Matrix<C>(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) (*jac)(i, j) = full(i, j + 1);
  }

 private:
  std::size_t n_;
  int max_exp_ = 1;
  bool expanded_ = false;
  std::vector<int> degrees_;
  std::vector<CompiledPolynomial> factors_;
  std::vector<double> weights_;
  std::vector<CompiledPolynomial> equations_;
};

}  // namespace region_carver
