#include "catch2/catch_amalgamated.hpp"

#include <map>
#include <numbers>
#include <random>
#include <set>

#include "region_carver/generators.hpp"
#include "region_carver/regions.hpp"
#include "region_carver/result_document.hpp"

using namespace region_carver;

namespace {

// Lines with well separated directions and offsets in [-1, 1], so every
// chamber is wide where it meets the sampling box.
Arrangement spread_lines(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Polynomial<double>> polys;
  for (std::size_t i = 0; i < k; ++i) {
    const double th = std::numbers::pi * (static_cast<double>(i) + 0.3 * u(g)) / static_cast<double>(k);
    Polynomial<double> p = Polynomial<double>::variable(2, 0) * std::cos(th) + Polynomial<double>::variable(2, 1) * std::sin(th);
    p += Polynomial<double>::constant(2, u(g));
    polys.push_back(std::move(p));
  }
  return Arrangement::make(std::move(polys));
}

struct LineOracle {
  std::size_t chambers = 0;            // 1 + k + number of vertices
  std::set<std::string> grid_signs;    // sign vectors seen on a grid around every vertex
};

// Lines in general position cut the plane into 1 + k + V convex chambers,
// each with its own sign vector.
LineOracle line_oracle(const Arrangement& arr, std::size_t cells) {
  auto c = [](const Polynomial<double>& f, int i) {
    std::vector<int> e(2, 0);
    if (i >= 0) e[static_cast<std::size_t>(i)] = 1;
    return f.coefficient(Monomial(e));
  };
  double r = 1.0;
  std::size_t vertices = 0;
  for (std::size_t a = 0; a < arr.k(); ++a)
    for (std::size_t b = a + 1; b < arr.k(); ++b) {
      const auto& p = arr.polys[a];
      const auto& q = arr.polys[b];
      const double det = c(p, 0) * c(q, 1) - c(p, 1) * c(q, 0);
      const double x = (-c(p, -1) * c(q, 1) + c(q, -1) * c(p, 1)) / det;
      const double y = (-c(p, 0) * c(q, -1) + c(q, 0) * c(p, -1)) / det;
      r = std::max({r, std::abs(x), std::abs(y)});
      ++vertices;
    }
  LineOracle out{1 + arr.k() + vertices, {}};
  r *= 3.0;
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) {
      const std::vector<double> x{-r + 2 * r * (static_cast<double>(i) + 0.5) / static_cast<double>(cells),
                                  -r + 2 * r * (static_cast<double>(j) + 0.5) / static_cast<double>(cells)};
      std::string s;
      for (const auto& f : arr.polys) s += f(x) > 0 ? '+' : '-';
      out.grid_signs.insert(s);
    }
  return out;
}

}  // namespace

TEST_CASE("line arrangements match the vertex count and a sign grid") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const auto arr = spread_lines(5, seed);
    const auto res = compute_regions(arr, seed);
    const auto oracle = line_oracle(arr, 1500);
    CHECK(res.regions.size() == oracle.chambers);
    std::set<std::string> found;
    for (const auto& r : res.regions) found.insert(r.sigma.to_string());
    CHECK(found == oracle.grid_signs);
    for (const auto& r : res.regions) {
      CHECK(r.chi == 1);
      for (std::size_t i : r.members) CHECK(res.critical_points[i].sigma == r.sigma);
    }
  }
}

TEST_CASE("Euler characteristic is the alternating index sum") {
  CHECK(euler_characteristic({1, 0, 0}) == 1);
  CHECK(euler_characteristic({2, 4, 4}) == 2);
  CHECK(euler_characteristic({1, 2, 1}) == 0);
  const auto res = compute_regions(elliptope(), 1);
  for (const auto& r : res.regions) {
    std::vector<int> mu(4, 0);
    for (std::size_t i : r.members) ++mu[static_cast<std::size_t>(res.critical_points[i].index)];
    CHECK(mu == r.mu);
    CHECK(r.chi == euler_characteristic(mu));
    CHECK(r.mu[0] >= 1);
  }
}

TEST_CASE("critical points are ordered by decreasing log g") {
  const auto res = compute_regions(elliptope(), 3);
  for (std::size_t i = 1; i < res.critical_points.size(); ++i)
    CHECK(res.critical_points[i - 1].log_g >= res.critical_points[i].log_g);
  for (const auto& r : res.regions)
    for (std::size_t i = 1; i < r.members.size(); ++i) CHECK(r.members[i - 1] < r.members[i]);
}

TEST_CASE("runs are deterministic and thread-count independent") {
  const auto& ex = builtin_example("discriminant8");
  const auto arr = Arrangement::parse(ex.polys, ex.vars);
  RegionsOptions one, four;
  four.threads = 4;
  four.solve.threads = 4;
  const auto a = make_document(compute_regions(arr, 7, one), 7);
  const auto b = make_document(compute_regions(arr, 7, one), 7);
  const auto c = make_document(compute_regions(arr, 7, four), 7);
  CHECK(a == b);
  CHECK(a.regions == c.regions);
  CHECK(a.complex_critical_points == c.complex_critical_points);
}

TEST_CASE("membership flows a point to its region") {
  const auto arr = random_arrangement(2, 3, 1, 5);
  const auto res = compute_regions(arr, 5);
  std::mt19937_64 g(1);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (int i = 0; i < 30; ++i) {
    const RealVector p{nd(g), nd(g)};
    if (res.morse.near_hypersurface(p, 1e-6) >= 0) continue;
    const Region& r = membership(res, p);
    CHECK(r.sigma == res.morse.signs(p));
  }
  CHECK_THROWS_AS(membership(res, RealVector{1.0}), DimensionError);
}

TEST_CASE("a disc and a line") {
  const std::vector<std::string> xy{"x", "y"};
  const auto res = compute_regions(Arrangement::parse({"x^2 + y^2 - 1", "y"}, xy), 2);
  // upper and lower half discs, and the two outer half planes
  REQUIRE(res.regions.size() == 4);
  std::map<std::string, int> chi;
  for (const auto& r : res.regions) chi[r.sigma.to_string()] = r.chi;
  CHECK(chi == std::map<std::string, int>{{"-+", 1}, {"--", 1}, {"++", 1}, {"+-", 1}});
}

TEST_CASE("an annulus has Euler characteristic zero") {
  const std::vector<std::string> xy{"x", "y"};
  const auto res = compute_regions(Arrangement::parse({"x^2 + y^2 - 1", "x^2 + y^2 - 4"}, xy), 3);
  REQUIRE(res.regions.size() == 3);
  std::map<std::string, int> chi;
  for (const auto& r : res.regions) chi[r.sigma.to_string()] = r.chi;
  CHECK(chi.at("--") == 1);
  CHECK(chi.at("+-") == 0);
  CHECK(chi.at("++") == 0);
}
