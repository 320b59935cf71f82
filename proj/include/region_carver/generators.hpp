#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/parse.hpp"
#include "region_carver/polynomial.hpp"
#include "region_carver/random.hpp"

namespace region_carver {

/// All exponent vectors of total degree <= d in n variables, by degree and
/// then lexicographically.
inline std::vector<Monomial> monomials_up_to(std::size_t n, int d) {
  std::vector<Monomial> out;
  std::vector<int> e(n, 0);
  for (int deg = 0; deg <= d; ++deg) {
    auto fill = [&](auto&& self, std::size_t i, int left) -> void {
      if (i + 1 == n) {
        e[i] = left;
        out.emplace_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[i] = v;
        self(self, i + 1, left - v);
      }
    };
    if (n == 0) {
      if (deg == 0) out.emplace_back(std::vector<int>{});
      continue;
    }
    fill(fill, 0, deg);
  }
  return out;
}

/// k dense polynomials of degree d with independent standard Gaussian
/// coefficients.
inline Arrangement random_arrangement(std::size_t n, std::size_t k, int d, std::uint64_t seed) {
  if (n == 0 || k == 0 || d < 1) throw std::invalid_argument("need n, k, d >= 1");
  Rng rng(seed);
  const auto monos = monomials_up_to(n, d);
  std::vector<Polynomial<double>> polys;
  for (std::size_t j = 0; j < k; ++j) {
    Polynomial<double> p(n);
    for (const auto& m : monos) p.add_term(m, rng.normal());
    polys.push_back(std::move(p));
  }
  return Arrangement::make(std::move(polys));
}

/// Affine symmetric pencil A(x) = A_0 + x_1 A_1 + ... + x_n A_n.
struct MatrixPencil {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Matrix<double>> mats;  // n + 1 symmetric m x m matrices

  Polynomial<double> entry(std::size_t i, std::size_t j) const {
    Polynomial<double> p = Polynomial<double>::constant(n, mats[0](i, j));
    for (std::size_t v = 0; v < n; ++v) p += Polynomial<double>::variable(n, v) * mats[v + 1](i, j);
    return p;
  }

  Matrix<double> at(std::span<const double> x) const {
    Matrix<double> a = mats[0];
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) += x[v] * mats[v + 1](i, j);
    return a;
  }
};

inline MatrixPencil random_pencil(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  MatrixPencil p{n, m, {}};
  for (std::size_t v = 0; v <= n; ++v) {
    Matrix<double> a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) a(i, j) = a(j, i) = rng.normal();
    p.mats.push_back(std::move(a));
  }
  return p;
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along the first row.
inline Polynomial<double> polynomial_determinant(const std::vector<std::vector<Polynomial<double>>>& a,
                                                 std::size_t nvars) {
  const std::size_t m = a.size();
  if (m == 0) return Polynomial<double>::constant(nvars, 1.0);
  if (m == 1) return a[0][0];
  Polynomial<double> det(nvars);
  for (std::size_t c = 0; c < m; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial<double>>> minor;
    for (std::size_t r = 1; r < m; ++r) {
      std::vector<Polynomial<double>> row;
      for (std::size_t cc = 0; cc < m; ++cc)
        if (cc != c) row.push_back(a[r][cc]);
      minor.push_back(std::move(row));
    }
    Polynomial<double> term = a[0][c] * polynomial_determinant(minor, nvars);
    if (c % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

/// Index subsets of {0..m-1} in the order the minors are emitted: by size,
/// then lexicographically.
inline std::vector<std::vector<std::size_t>> principal_subsets(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= m; ++size) {
    std::vector<std::size_t> s(size);
    for (std::size_t i = 0; i < size; ++i) s[i] = i;
    for (;;) {
      out.push_back(s);
      std::size_t i = size;
      while (i > 0 && s[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++s[i - 1];
      for (std::size_t j = i; j < size; ++j) s[j] = s[j - 1] + 1;
    }
  }
  return out;
}

/// The 2^m - 1 principal minors of the pencil as polynomials in x.
inline std::vector<Polynomial<double>> principal_minors(const MatrixPencil& p) {
  std::vector<Polynomial<double>> out;
  for (const auto& s : principal_subsets(p.m)) {
    std::vector<std::vector<Polynomial<double>>> sub;
    for (std::size_t i : s) {
      std::vector<Polynomial<double>> row;
      for (std::size_t j : s) row.push_back(p.entry(i, j));
      sub.push_back(std::move(row));
    }
    out.push_back(polynomial_determinant(sub, p.n));
  }
  return out;
}

inline Arrangement random_spectrahedron(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw std::invalid_argument("need n, m >= 1");
  return Arrangement::make(principal_minors(random_pencil(n, m, seed)));
}

struct NamedExample {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> polys;
  std::optional<std::string> q;
};

inline const std::vector<NamedExample>& builtin_examples() {
  static const std::vector<NamedExample> examples{
      {"ellipsoids",
       {"x", "y", "z"},
       {"x^2 + y^2 + z^2 - 1", "x^2 + y^2 + z^2 - 4", "100*x^2 + 100*y^2 + z^2 - 9"},
       "(x + 2)^2 + (y - 3)^2 + (z - 3)^2 + (2*x + y)^2 + 4"},
      {"hyperboloid",
       {"x", "y", "z"},
       {"z", "x^2 + y^2 - 1 + z", "x^2 + y^2 - 1 - z", "x^2 + y^2 - 1/4 - 3/2z^2"},
       std::nullopt},
      {"discriminant8",
       {"x", "y"},
       {"x + y",
        "23*x^6 + 60*x^5*y + 50*x^4*y^2 + 16*x^3*y^3 + 3*x^2*y^4 - 78*x^5 - 336*x^4*y - 478*x^3*y^2 - "
        "284*x^2*y^3 - 76*x*y^4 - 12*y^5 - 87*x^4 - 144*x^3*y + 54*x^2*y^2 + 180*x*y^3 + 68*y^4 + 28*x^3 + "
        "24*x^2*y - 58*x*y^2 - 56*y^3 - 87*x^2 - 300*x*y - 208*y^2 - 78*x - 72*y + 23",
        "x + 3*y + 1", "5*x^2 + 4*x*y + y^2 - 6*x - 4*y + 5"},
       std::nullopt},
      {"elliptope",
       {"x", "y", "z"},
       {"1 - x", "1 + x", "1 - y", "1 + y", "1 - z", "1 + z", "2*x*y*z - x^2 - y^2 - z^2 + 1"},
       std::nullopt},
      {"paraboloids",
       {"x", "y", "z"},
       {"3 + x + 3*y - z + (1 + 2*x + 4*y - 4*z)^2 + (2 + 3*x + 2*y + 3*z)^2",
        "3 + x + 3*z + (3 - 3*x - 2*z)^2 + (3 + 3*x + 3*y + 4*z)^2",
        "2 - 2*x - 2*y - 3*z + (2 - x + 4*z)^2 + (2 + 3*x + y + 2*z)^2",
        "1 - 3*x + 3*y - 3*z + (1 - 2*y + 2*z)^2 + (2 + x + 4*y)^2"},
       std::nullopt},
  };
  return examples;
}

inline const NamedExample& builtin_example(std::string_view name) {
  for (const auto& e : builtin_examples())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

/// The elliptope spectrahedron: facet factors and the determinant of
/// [[1, x, y], [x, 1, z], [y, z, 1]].
inline Arrangement elliptope() {
  const auto& e = builtin_example("elliptope");
  return Arrangement::parse(e.polys, e.vars);
}

}  // namespace region_carver
