#include "catch2/catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>

#include "region_carver/critical_points.hpp"
#include "region_carver/critical_system.hpp"
#include "region_carver/generators.hpp"
#include "region_carver/ml_degree.hpp"
#include "region_carver/morse.hpp"

using namespace region_carver;

namespace {

const std::vector<std::string> xv{"x"};
const std::vector<std::string> xy{"x", "y"};

SolveResult solve(const MorseFunction& m, std::uint64_t seed) {
  return solve_critical_points(assemble_critical_system(m), seed);
}

void check_accounting(const SolveResult& r) {
  CHECK(r.converged + r.diverged + r.failed == static_cast<std::size_t>(r.bezout));
  CHECK(r.records.size() == static_cast<std::size_t>(r.bezout));
  CHECK(r.extraneous <= r.converged);
  CHECK(r.points.size() <= r.converged - r.extraneous);
}

std::vector<double> sorted_real(const MorseFunction& m, const SolveResult& r) {
  std::vector<double> out;
  for (const auto& cp : real_critical_points(m, r.points)) out.push_back(cp.x[0]);
  std::sort(out.begin(), out.end());
  return out;
}

// Real zeros of d/dx log g located by sign changes of a central difference on
// a fine grid, then bisection.
std::vector<double> bisection_oracle(const MorseFunction& m, double lo, double hi, std::size_t samples) {
  auto deriv = [&](double x) -> std::optional<double> {
    const double h = 1e-7 * (1 + std::abs(x));
    try {
      return (m.log_value(RealVector{x + h}) - m.log_value(RealVector{x - h})) / (2 * h);
    } catch (const OnHypersurfaceError&) {
      return std::nullopt;
    }
  };
  std::vector<double> roots;
  double px = lo;
  auto pv = deriv(px);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    const auto v = deriv(x);
    // a sign change across a pole of log g is not a critical point
    bool pole = false;
    for (const auto& f : m.arrangement().polys)
      pole = pole || f(std::vector<double>{px}) * f(std::vector<double>{x}) <= 0;
    if (v && pv && !pole && (*v > 0) != (*pv > 0)) {
      double a = px, b = x;
      const bool up = *pv > 0;
      for (int it = 0; it < 80; ++it) {
        const double c = 0.5 * (a + b);
        const auto cv = deriv(c);
        if (!cv) break;
        ((*cv > 0) == up ? a : b) = c;
      }
      roots.push_back(0.5 * (a + b));
    }
    px = x;
    pv = v;
  }
  return roots;
}

}  // namespace

TEST_CASE("linear factor on the line: quadratic formula") {
  for (double a : {-2.0, 0.7, 1.3, 3.5}) {
    const auto arr = Arrangement::parse({"x - (" + std::to_string(a) + ")"}, xv);
    const auto m = build_morse_function_with_quadric(arr, parse_polynomial("x^2 + 1", xv));
    REQUIRE(m.t() == 1);
    const auto r = solve(m, 3);
    check_accounting(r);
    const auto xs = sorted_real(m, r);
    // 1/(x - a) = 2x/(x^2 + 1)  <=>  x^2 - 2 a x - 1 = 0
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == Catch::Approx(a - std::sqrt(a * a + 1)).epsilon(1e-10));
    CHECK(xs[1] == Catch::Approx(a + std::sqrt(a * a + 1)).epsilon(1e-10));
  }
}

TEST_CASE("univariate arrangements agree with a bisection oracle") {
  const std::vector<std::vector<std::string>> cases{
      {"x^2 - 1", "x - 3"},
      {"x^3 - 2*x + 0.5"},
      {"x", "x - 1", "x + 2", "x^2 - 5"},
  };
  for (const auto& polys : cases) {
    const auto arr = Arrangement::parse(polys, xv);
    const auto m = build_morse_function_with_quadric(arr, parse_polynomial("x^2 + 0.3*x + 2", xv));
    const auto r = solve(m, 5);
    check_accounting(r);
    const auto xs = sorted_real(m, r);
    const auto want = bisection_oracle(m, -60.0137, 59.9911, 240000);
    REQUIRE(xs.size() == want.size());
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(xs[i] == Catch::Approx(want[i]).margin(1e-6));
  }
}

TEST_CASE("generic plane arrangements reach the ML bound") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto arr = random_arrangement(2, 2, 2, seed);
    const auto m = build_morse_function(arr, seed);
    const auto r = solve(m, seed);
    check_accounting(r);
    const auto bound = ml_degree_bound(arr.degrees(), 2).bound;
    CHECK(static_cast<std::int64_t>(r.points.size()) <= bound);
    CHECK(static_cast<std::int64_t>(r.points.size()) == bound);
    CHECK(r.max_residual < 1e-8);
  }
}

TEST_CASE("the solution set does not depend on the homotopy seed") {
  const auto arr = Arrangement::parse({"x^2 + y^2 - 1", "x - y + 0.25", "x*y - 0.1"}, xy);
  const auto m = build_morse_function(arr, 4);
  const auto a = solve(m, 1), b = solve(m, 99);
  check_accounting(a);
  check_accounting(b);
  REQUIRE(a.points.size() == b.points.size());
  for (const auto& p : a.points) {
    double best = 1e300;
    for (const auto& q : b.points) best = std::min(best, distance(p, q));
    CHECK(best < 1e-6 * (1 + norm2(std::span<const std::complex<double>>(p))));
  }
}

TEST_CASE("homotopy endpoints satisfy the critical equations") {
  const auto m = build_morse_function(elliptope(), 2);
  const auto r = solve(m, 2);
  check_accounting(r);
  for (const auto& cp : real_critical_points(m, r.points)) {
    const auto e = m.evaluate(cp.x);
    CHECK(norm2(e.grad) < 1e-7 * (1 + norm2(cp.x)));
  }
}
