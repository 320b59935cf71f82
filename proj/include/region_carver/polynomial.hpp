#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "region_carver/errors.hpp"

namespace region_carver {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Total degree of a polynomial. The zero polynomial has degree minus
/// infinity, which compares below every finite degree and has no value().
class Degree {
 public:
  constexpr explicit Degree(int d) : value_(d), finite_(true) {}

  static constexpr Degree minus_infinity() { return Degree(); }

  constexpr bool is_finite() const noexcept { return finite_; }

  int value() const {
    if (!finite_) throw std::logic_error("degree of the zero polynomial has no value");
    return value_;
  }

  friend constexpr bool operator==(Degree a, Degree b) noexcept {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) noexcept {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(Degree a, int b) noexcept { return a.finite_ && a.value_ == b; }
  friend constexpr std::strong_ordering operator<=>(Degree a, int b) noexcept {
    if (!a.finite_) return std::strong_ordering::less;
    return a.value_ <=> b;
  }

 private:
  constexpr Degree() = default;
  int value_ = 0;
  bool finite_ = false;
};

/// Exponent vector of a monomial. Ordered graded-lexicographically:
/// first by total degree, then lexicographically with x_1 most significant.
class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
    for (int e : exps_) {
      if (e < 0) throw std::invalid_argument("monomial exponents must be non-negative");
      total_ += e;
    }
  }

  Monomial(std::initializer_list<int> exponents) : Monomial(std::vector<int>(exponents)) {}

  static Monomial one(std::size_t nvars) { return Monomial(std::vector<int>(nvars, 0)); }

  static Monomial variable(std::size_t nvars, std::size_t i, int power = 1) {
    std::vector<int> e(nvars, 0);
    e.at(i) = power;
    return Monomial(std::move(e));
  }

  std::size_t size() const noexcept { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  int total_degree() const noexcept { return total_; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  Monomial operator*(const Monomial& other) const {
    if (other.size() != size()) throw DimensionError("monomial dimension mismatch");
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
    return Monomial(std::move(e));
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.total_ <=> b.total_; c != 0) return c;
    return a.exps_ <=> b.exps_;
  }

 private:
  std::vector<int> exps_;
  int total_ = 0;
};

/// Sparse multivariate polynomial in a fixed number of variables. Zero
/// coefficients are never stored.
template <class Scalar = double>
class Polynomial {
 public:
  using scalar_type = Scalar;
  using term_map = std::map<Monomial, Scalar>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Scalar c) {
    Polynomial p(nvars);
    p.add_term(Monomial::one(nvars), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw DimensionError("variable index out of range");
    Polynomial p(nvars);
    p.add_term(Monomial::variable(nvars, i), Scalar{1});
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const term_map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Degree degree() const {
    if (terms_.empty()) return Degree::minus_infinity();
    return Degree(terms_.rbegin()->first.total_degree());
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = terms_.begin()->first.total_degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return t.first.total_degree() == d; });
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total_degree() == 0);
  }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, static_cast<double>(std::abs(c)));
    return m;
  }

  void add_term(const Monomial& m, Scalar c) {
    if (m.size() != nvars_) throw DimensionError("monomial has wrong number of variables");
    if (c == Scalar{}) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar{}) terms_.erase(it);
    }
  }

  template <class T>
  auto operator()(std::span<const T> x) const {
    using R = std::common_type_t<Scalar, T>;
    if (x.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
    int maxe = 0;
    for (const auto& [m, c] : terms_)
      for (int e : m.exponents()) maxe = std::max(maxe, e);
    std::vector<T> pw(nvars_ * static_cast<std::size_t>(maxe + 1));
    for (std::size_t i = 0; i < nvars_; ++i) {
      T* row = pw.data() + i * static_cast<std::size_t>(maxe + 1);
      row[0] = T{1};
      for (int e = 1; e <= maxe; ++e) row[e] = row[e - 1] * x[i];
    }
    R sum{};
    for (const auto& [m, c] : terms_) {
      R t = R(c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i] != 0) t *= R(pw[i * static_cast<std::size_t>(maxe + 1) + m[i]]);
      sum += t;
    }
    return sum;
  }

  template <class T>
  auto operator()(const std::vector<T>& x) const {
    return (*this)(std::span<const T>(x));
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same_space(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same_space(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(Scalar s) {
    if (s == Scalar{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_space(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same_space(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw DimensionError("polynomials live in different variable spaces");
  }

  std::size_t nvars_ = 0;
  term_map terms_;
};

template <class S>
Polynomial<S> pow(const Polynomial<S>& p, int e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  Polynomial<S> result = Polynomial<S>::constant(p.nvars(), S{1});
  Polynomial<S> base = p;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

template <class S>
Polynomial<S> differentiate(const Polynomial<S>& p, std::size_t i) {
  if (i >= p.nvars()) throw DimensionError("differentiation index out of range");
  Polynomial<S> r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[i] == 0) continue;
    std::vector<int> e = m.exponents();
    const int k = e[i]--;
    r.add_term(Monomial(std::move(e)), c * S(k));
  }
  return r;
}

template <class S, class T>
auto evaluate(const Polynomial<S>& p, std::span<const T> x) {
  return p(x);
}

/// Homogenizes with a new leading variable x_0 to the degree of p.
template <class S>
Polynomial<S> homogenize(const Polynomial<S>& p) {
  Polynomial<S> r(p.nvars() + 1);
  if (p.is_zero()) return r;
  const int d = p.degree().value();
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e;
    e.reserve(m.size() + 1);
    e.push_back(d - m.total_degree());
    e.insert(e.end(), m.exponents().begin(), m.exponents().end());
    r.add_term(Monomial(std::move(e)), c);
  }
  return r;
}

/// Fixes the leading variables to the given values and returns a polynomial in
/// the remaining ones.
template <class S>
Polynomial<S> substitute_leading(const Polynomial<S>& p, std::span<const S> values) {
  const std::size_t m = values.size();
  if (m > p.nvars()) throw DimensionError("too many substituted values");
  Polynomial<S> r(p.nvars() - m);
  for (const auto& [mono, c] : p.terms()) {
    S coef = c;
    for (std::size_t i = 0; i < m; ++i)
      for (int e = 0; e < mono[i]; ++e) coef *= values[i];
    if (coef == S{}) continue;
    std::vector<int> e(mono.exponents().begin() + static_cast<std::ptrdiff_t>(m), mono.exponents().end());
    r.add_term(Monomial(std::move(e)), coef);
  }
  return r;
}

/// Inverse of homogenize: sets x_0 = 1.
template <class S>
Polynomial<S> dehomogenize(const Polynomial<S>& p) {
  const S one{1};
  return substitute_leading(p, std::span<const S>(&one, 1));
}

/// Restricts a homogeneous polynomial in (x_0, ..., x_n) to the chart
/// x_0 = 0, x_1 = 1 of the hyperplane at infinity.
template <class S>
Polynomial<S> restrict_chart(const Polynomial<S>& p) {
  if (!p.is_homogeneous()) throw std::invalid_argument("restrict_chart needs a homogeneous polynomial");
  const S vals[2] = {S{0}, S{1}};
  return substitute_leading(p, std::span<const S>(vals, 2));
}

template <class S>
Polynomial<std::complex<double>> to_complex(const Polynomial<S>& p) {
  Polynomial<std::complex<double>> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, std::complex<double>(c));
  return r;
}

/// Coefficients (constant term first) of the univariate polynomial
/// t -> p(t * direction).
inline std::vector<double> ray_polynomial(const Polynomial<double>& p, std::span<const double> direction) {
  if (direction.size() != p.nvars()) throw DimensionError("ray direction has wrong dimension");
  std::vector<double> coeffs(p.is_zero() ? 1 : static_cast<std::size_t>(p.degree().value()) + 1, 0.0);
  for (const auto& [m, c] : p.terms()) {
    double v = c;
    for (std::size_t i = 0; i < m.size(); ++i) v *= std::pow(direction[i], m[i]);
    coeffs[static_cast<std::size_t>(m.total_degree())] += v;
  }
  return coeffs;
}

/// Two polynomials define the same hypersurface up to a nonzero scalar.
inline bool proportional(const Polynomial<double>& a, const Polynomial<double>& b, double rtol = 1e-12) {
  if (a.nvars() != b.nvars() || a.size() != b.size() || a.is_zero()) return false;
  const double ratio = a.terms().rbegin()->second / b.terms().rbegin()->second;
  auto ib = b.terms().begin();
  for (auto ia = a.terms().begin(); ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return false;
    if (std::abs(ia->second - ratio * ib->second) > rtol * std::abs(ia->second)) return false;
  }
  return true;
}

}  // namespace region_carver
