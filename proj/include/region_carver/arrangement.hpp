#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "region_carver/errors.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/parse.hpp"
#include "region_carver/polynomial.hpp"

namespace region_carver {

/// The input list f_1, ..., f_k of real polynomials in n variables.
struct Arrangement {
  std::size_t n = 0;
  std::vector<Polynomial<double>> polys;
  std::vector<std::string> vars;

  static Arrangement make(std::vector<Polynomial<double>> polys, std::vector<std::string> vars = {}) {
    if (polys.empty()) throw std::invalid_argument("an arrangement needs at least one polynomial");
    Arrangement a;
    a.n = polys.front().nvars();
    if (vars.empty()) vars = default_variable_names(a.n);
    if (vars.size() != a.n) throw DimensionError("variable names do not match the dimension");
    for (const auto& p : polys) {
      if (p.nvars() != a.n) throw DimensionError("all polynomials must have the same number of variables");
      if (p.is_zero()) throw std::invalid_argument("the zero polynomial cannot be part of an arrangement");
    }
    a.polys = std::move(polys);
    a.vars = std::move(vars);
    return a;
  }

  static Arrangement parse(const std::vector<std::string>& exprs, std::vector<std::string> vars) {
    std::vector<Polynomial<double>> polys;
    polys.reserve(exprs.size());
    for (const auto& e : exprs) polys.push_back(parse_polynomial(e, vars));
    return make(std::move(polys), std::move(vars));
  }

  std::size_t k() const noexcept { return polys.size(); }

  std::vector<int> degrees() const {
    std::vector<int> d;
    d.reserve(polys.size());
    for (const auto& p : polys) d.push_back(p.degree().value());
    return d;
  }
};

/// Componentwise signs of (f_1, ..., f_k), stored as +1 / -1.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<signed char> signs) : signs_(std::move(signs)) {}

  static SignVector from_string(std::string_view s) {
    std::vector<signed char> v;
    for (char c : s) {
      if (c == '+') v.push_back(1);
      else if (c == '-') v.push_back(-1);
      else throw std::invalid_argument("sign vector strings contain only '+' and '-'");
    }
    return SignVector(std::move(v));
  }

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<signed char>& values() const noexcept { return signs_; }

  std::string to_string() const {
    std::string s;
    for (auto v : signs_) s += v > 0 ? '+' : '-';
    return s;
  }

  friend bool operator==(const SignVector&, const SignVector&) = default;
  friend auto operator<=>(const SignVector& a, const SignVector& b) { return a.signs_ <=> b.signs_; }

 private:
  std::vector<signed char> signs_;
};

/// |f(x)| below this is treated as "on the hypersurface": rel * (max |coef|) * (1 + |x|^deg).
inline double hypersurface_floor(const Polynomial<double>& f, std::span<const double> x, double rel) {
  const double r = norm2(x);
  const int d = f.is_zero() ? 0 : f.degree().value();
  return rel * f.max_abs_coefficient() * (1.0 + std::pow(r, d));
}

inline constexpr double kSignFloor = 1e-12;

/// Signs of the arrangement at x; throws AmbiguousSignError near a hypersurface.
inline SignVector sign_vector(const Arrangement& arr, std::span<const double> x, double rel_floor = kSignFloor) {
  if (x.size() != arr.n) throw DimensionError("point has wrong dimension");
  std::vector<signed char> s;
  s.reserve(arr.k());
  for (std::size_t i = 0; i < arr.k(); ++i) {
    const double v = arr.polys[i](x);
    if (std::abs(v) < hypersurface_floor(arr.polys[i], x, rel_floor))
      throw AmbiguousSignError("sign of f_" + std::to_string(i + 1) + " is ambiguous at this point", i);
    s.push_back(v > 0 ? 1 : -1);
  }
  return SignVector(std::move(s));
}

inline SignVector sign_vector(const Arrangement& arr, const RealVector& x, double rel_floor = kSignFloor) {
  return sign_vector(arr, std::span<const double>(x), rel_floor);
}

}  // namespace region_carver
