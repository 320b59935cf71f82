#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "region_carver/generators.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/regions.hpp"

using namespace region_carver;

namespace {

RealVector random_point(const MorseFunction& m, std::mt19937_64& g) {
  std::normal_distribution<double> nd(0.0, 1.5);
  for (;;) {
    RealVector x(m.n());
    for (auto& v : x) v = nd(g);
    if (m.near_hypersurface(x, 1e-3) < 0) return x;
  }
}

double rel_err(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-12); }

}  // namespace

TEST_CASE("default t exceeds half the weighted degree") {
  CHECK(default_t(std::vector<int>{1, 1, 1}, std::vector<int>{2, 2, 2}) == 4);
  CHECK(default_t(std::vector<int>{1, 1, 1, 1}, std::vector<int>{1, 2, 2, 2}) == 4);
  CHECK(default_t(std::vector<int>{2}, std::vector<int>{3}) == 4);
}

TEST_CASE("random quadric is positive definite") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto q = random_positive_quadric(3, seed);
    CHECK(is_positive_quadric(q));
    CHECK(q.degree().value() == 2);
  }
  CHECK_FALSE(is_positive_quadric(parse_polynomial("x^2 - y^2 + 1", std::vector<std::string>{"x", "y"})));
}

TEST_CASE("Morse function rejects inadmissible exponents") {
  const auto arr = elliptope();
  CHECK_THROWS_AS(build_morse_function(arr, 1, std::nullopt, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_morse_function(arr, 1, std::vector<int>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_morse_function(arr, 1, std::vector<int>(7, 0)), std::invalid_argument);
  CHECK_NOTHROW(build_morse_function(arr, 1));
}

TEST_CASE("gradient and Hessian match finite differences") {
  std::mt19937_64 g(21);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto arr = seed % 2 ? random_arrangement(2, 3, 2, seed) : random_arrangement(3, 2, 2, seed);
    const auto m = build_morse_function(arr, seed, std::vector<int>(arr.k(), 1 + static_cast<int>(seed % 3)));
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = random_point(m, g);
      const auto e = m.evaluate(x, true);
      const double h = 1e-6 * (1.0 + norm2(x));
      double gscale = 0;
      for (double v : e.grad) gscale = std::max(gscale, std::abs(v));
      double hscale = 0;
      for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) hscale = std::max(hscale, std::abs((*e.hessian)(i, j)));
      for (std::size_t i = 0; i < m.n(); ++i) {
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const auto ep = m.evaluate(xp, false), em = m.evaluate(xm, false);
        CHECK(rel_err((ep.value - em.value) / (2 * h), e.grad[i], gscale) < 1e-5);
        for (std::size_t j = 0; j < m.n(); ++j) {
          const double fd = (ep.grad[j] - em.grad[j]) / (2 * h);
          CHECK(rel_err(fd, (*e.hessian)(i, j), hscale) < 1e-4);
        }
      }
    }
  }
}

TEST_CASE("evaluating on a hypersurface throws") {
  const auto m = build_morse_function(elliptope(), 1);
  const RealVector on{1.0, 0.3, 0.2};
  CHECK(m.near_hypersurface(on) == 0);
  CHECK_THROWS_AS(m.evaluate(on), OnHypersurfaceError);
  CHECK_THROWS_AS(m.signs(on), AmbiguousSignError);
  CHECK_THROWS_AS(m.evaluate(RealVector{0.1, 0.2}), DimensionError);
}

TEST_CASE("g and log g have the same Hessian inertia at critical points") {
  const auto& ex = builtin_example("discriminant8");
  const auto res = compute_regions(Arrangement::parse(ex.polys, ex.vars), 1);
  const auto& m = res.morse;
  REQUIRE_FALSE(res.critical_points.empty());
  for (const auto& cp : res.critical_points) {
    // Hessian of g = exp(log g) by second differences
    const std::size_t n = m.n();
    const double h = 1e-4 * (1.0 + norm2(cp.x));
    const double g0 = std::exp(m.log_value(cp.x) - cp.log_g);
    Matrix<double> hg(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto at = [&](double a, double b) {
          auto y = cp.x;
          y[i] += a;
          y[j] += b;
          return std::exp(m.log_value(y) - cp.log_g);
        };
        hg(i, j) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
      }
    const auto eg = jacobi_eigen(hg);
    int positive = 0;
    for (double v : eg.values) positive += v > 0;
    CHECK(positive == cp.index);
    CHECK(g0 == Catch::Approx(1.0));
  }
}
