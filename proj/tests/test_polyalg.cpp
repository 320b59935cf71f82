#include "catch2/catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "region_carver/generators.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/ml_degree.hpp"
#include "region_carver/parse.hpp"
#include "region_carver/polynomial.hpp"
#include "region_carver/polynomial_json.hpp"
#include "region_carver/union_find.hpp"
#include "region_carver/univariate_roots.hpp"

using namespace region_carver;
using Catch::Approx;

namespace {

const std::vector<std::string> xyz{"x", "y", "z"};

Polynomial<double> P(const std::string& s) { return parse_polynomial(s, xyz); }

Polynomial<double> random_poly(std::mt19937_64& g, int d) {
  std::normal_distribution<double> nd;
  Polynomial<double> p(3);
  for (const auto& m : monomials_up_to(3, d))
    if (g() % 2) p.add_term(m, nd(g));
  if (p.is_zero()) p.add_term(Monomial::one(3), 1.0);
  return p;
}

}  // namespace

TEST_CASE("parse and print small polynomials") {
  CHECK(to_string(P("x^2 + y^2 + z^2 - 1"), xyz) == "x^2 + y^2 + z^2 - 1");
  CHECK(P("(x + y)^2") == P("x^2 + 2*x*y + y^2"));
  CHECK(P("x^2 + y^2 - 1/4 - 3/2*z^2").coefficient(Monomial::variable(3, 2, 2)) == Approx(-1.5));
  CHECK(P("2*x*y*z").degree().value() == 3);
  CHECK(P("0").is_zero());
  CHECK_THROWS_AS(P("x +"), ParseError);
  CHECK_THROWS_AS(P("w + 1"), ParseError);
  CHECK_THROWS_AS(P("x^-1"), ParseError);
}

TEST_CASE("printing round-trips through the parser") {
  std::mt19937_64 g(7);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_poly(g, 4);
    const auto q = P(to_string(p, xyz));
    REQUIRE(q.size() == p.size());
    for (const auto& [m, c] : p.terms()) CHECK(q.coefficient(m) == Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("json round-trip is exact") {
  std::mt19937_64 g(11);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_poly(g, 3);
    const auto back = polynomial_from_json(nlohmann::json::parse(polynomial_to_json(p, xyz).dump()));
    CHECK(back.vars == xyz);
    CHECK(back.poly == p);
  }
}

TEST_CASE("ring laws hold on random polynomials") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_poly(g, 2), b = random_poly(g, 3), c = random_poly(g, 2);
    const std::vector<double> x{u(g), u(g), u(g)};
    const double ax = a(x), bx = b(x), cx = c(x);
    CHECK((a * b)(x) == Approx(ax * bx).margin(1e-10));
    CHECK((a * (b + c))(x) == Approx(ax * (bx + cx)).margin(1e-10));
    CHECK((a - a).is_zero());
    CHECK(pow(a, 3)(x) == Approx(ax * ax * ax).margin(1e-9));
  }
}

TEST_CASE("derivatives agree with central differences") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_poly(g, 4);
    std::vector<double> x{u(g), u(g), u(g)};
    for (std::size_t v = 0; v < 3; ++v) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[v] += h;
      xm[v] -= h;
      const double fd = (p(xp) - p(xm)) / (2 * h);
      CHECK(differentiate(p, v)(x) == Approx(fd).margin(1e-6));
    }
  }
}

TEST_CASE("homogenize and dehomogenize are inverse") {
  const auto p = P("x^3 - 2*x*y + z - 7");
  const auto h = homogenize(p);
  CHECK(h.is_homogeneous());
  CHECK(h.nvars() == 4);
  CHECK(dehomogenize(h) == p);
  CHECK(to_string(restrict_chart(h), std::vector<std::string>{"y", "z"}) == "1");
}

TEST_CASE("Jacobi eigenpairs reconstruct the matrix") {
  std::mt19937_64 g(9);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
    Matrix<double> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = nd(g);
    const auto e = jacobi_eigen(a);
    REQUIRE(std::is_sorted(e.values.begin(), e.values.end()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += e.vectors(i, l) * e.values[l] * e.vectors(j, l);
        CHECK(s == Approx(a(i, j)).margin(1e-10));
      }
  }
}

TEST_CASE("Jacobi on a known spectrum") {
  Matrix<double> a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 2;
  const auto e = jacobi_eigen(a);
  CHECK(e.values[0] == Approx(1.0));
  CHECK(e.values[1] == Approx(3.0));
}

TEST_CASE("LU solves random systems") {
  std::mt19937_64 g(13);
  std::normal_distribution<double> nd;
  Matrix<double> a(4, 4);
  std::vector<double> x{1, -2, 0.5, 3}, b(4, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = nd(g);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) b[i] += a(i, j) * x[j];
  REQUIRE(lu_solve(a, std::span<double>(b)));
  for (std::size_t i = 0; i < 4; ++i) CHECK(b[i] == Approx(x[i]).margin(1e-12));
  Matrix<double> singular(2, 2);
  std::vector<double> rhs{1, 1};
  CHECK_FALSE(lu_solve(singular, std::span<double>(rhs)));
}

TEST_CASE("Aberth roots of a product of known factors") {
  // (z - 1)(z + 2)(z - 3i)(z + 3i) = (z^2 + z - 2)(z^2 + 9)
  const std::vector<double> coeffs{-18, 9, 7, 1, 1};
  auto r = roots_of_univariate(coeffs);
  REQUIRE(r.size() == 4);
  const std::vector<std::complex<double>> want{{1, 0}, {-2, 0}, {0, 3}, {0, -3}};
  for (const auto& w : want) {
    const auto best = std::min_element(r.begin(), r.end(), [&](auto a, auto b) { return std::abs(a - w) < std::abs(b - w); });
    CHECK(std::abs(*best - w) < 1e-10);
  }
  CHECK(roots_of_univariate(std::vector<double>{0, 0, 1}).size() == 2);
}

TEST_CASE("union-find components") {
  UnionFind uf(6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(3, 4));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.unite(4, 5));
  CHECK(uf.same(3, 5));
  CHECK_FALSE(uf.same(0, 2));
  CHECK(uf.labels() == std::vector<std::size_t>{0, 0, 1, 2, 2, 2});
}

namespace {

// Coefficient of z^n in (1-z)^n / ((1-d_1 z)...(1-d_k z)(1-2z)), by explicit
// power series multiplication.
long long series_bound(const std::vector<int>& d, int n) {
  std::vector<long long> num(n + 1, 0);
  long long b = 1;
  for (int i = 0; i <= n; ++i) {
    num[i] = (i % 2 ? -b : b);
    b = b * (n - i) / (i + 1);
  }
  std::vector<int> all = d;
  all.push_back(2);
  for (int di : all) {
    std::vector<long long> geo(n + 1);
    long long p = 1;
    for (int i = 0; i <= n; ++i, p *= di) geo[i] = p;
    std::vector<long long> out(n + 1, 0);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) out[i + j] += num[i] * geo[j];
    num = out;
  }
  return num[n];
}

}  // namespace

TEST_CASE("ML degree bound matches the series oracle") {
  CHECK(ml_degree_bound({2, 2, 2}, 3).bound == series_bound({2, 2, 2}, 3));
  CHECK(series_bound({2, 2, 2}, 3) == 63);
  CHECK(ml_degree_bound({1, 1, 1, 1}, 2).bound == 11);
  CHECK(ml_degree_bound({1, 1, 1, 1}, 3).bound == 15);
  CHECK(ml_degree_bound({2, 2}, 2).bound == 13);
  for (int n = 1; n <= 4; ++n)
    for (const auto& d : std::vector<std::vector<int>>{{1}, {2, 3}, {1, 1, 4}, {3, 3, 3, 3}})
      CHECK(ml_degree_bound(d, n).bound == series_bound(d, n));
  CHECK_THROWS(ml_degree_bound({0}, 2));
}

TEST_CASE("hyperplane ML bound counts chambers") {
  // sum_{j <= n} C(k, j)
  auto chambers = [](int k, int n) {
    long long s = 0, c = 1;
    for (int j = 0; j <= n; ++j) {
      s += c;
      c = c * (k - j) / (j + 1);
    }
    return s;
  };
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 7; ++k) CHECK(ml_degree_bound(std::vector<int>(static_cast<std::size_t>(k), 1), n).bound == chambers(k, n));
}
