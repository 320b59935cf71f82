#include "catch2/catch_amalgamated.hpp"

#include <map>

#include "region_carver/generators.hpp"
#include "region_carver/projective.hpp"
#include "region_carver/regions.hpp"

using namespace region_carver;

namespace {

std::map<Boundedness, int> tally(const RegionsResult& res) {
  std::map<Boundedness, int> out;
  for (const auto& r : res.regions) ++out[r.boundedness];
  return out;
}

}  // namespace

TEST_CASE("points on the line: the two rays meet at infinity") {
  const std::vector<std::string> xv{"x"};
  auto res = compute_regions(Arrangement::parse({"x - 1", "x + 2", "x^2 - 9"}, xv), 1);
  REQUIRE(res.regions.size() == 5);
  const auto fusion = compute_projective_regions(res);
  CHECK(fusion.groups.size() == 4);
  apply_boundedness(res);
  const auto t = tally(res);
  CHECK(t.at(Boundedness::unbounded) == 2);
  CHECK(t.at(Boundedness::bounded) == 3);
  for (const auto& r : res.regions) {
    const double x = res.critical_points[r.members.front()].x[0];
    CHECK((r.boundedness == Boundedness::unbounded) == (x < -3 || x > 3));
  }
}

TEST_CASE("generic lines: projective regions and bounded chambers") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const std::size_t k = 4;
    auto res = compute_regions(random_arrangement(2, k, 1, seed), seed);
    REQUIRE(res.regions.size() == 11);
    res.projective = compute_projective_regions(res);
    // k generic lines cut the real projective plane into (k^2 - k + 2) / 2 pieces
    CHECK(res.projective->groups.size() == (k * k - k + 2) / 2);
    CHECK_FALSE(res.projective->heuristic_incomplete);
    apply_boundedness(res);
    const auto t = tally(res);
    CHECK(t.at(Boundedness::unbounded) == 2 * static_cast<int>(k));
    CHECK(t.at(Boundedness::bounded) == 3);
  }
}

TEST_CASE("disc and its outside") {
  const std::vector<std::string> xy{"x", "y"};
  auto res = compute_regions(Arrangement::parse({"x^2 + y^2 - 1"}, xy), 1);
  REQUIRE(res.regions.size() == 2);
  const auto fusion = compute_projective_regions(res);
  CHECK(fusion.groups.size() == 2);
  apply_boundedness(res);
  for (const auto& r : res.regions)
    CHECK(r.boundedness == (r.sigma.to_string() == "-" ? Boundedness::bounded : Boundedness::unbounded));
  REQUIRE(res.delta);
  CHECK(*res.delta == 1e-5);
}

TEST_CASE("strip pieces outside a disc are never called bounded") {
  const std::vector<std::string> xy{"x", "y"};
  auto res = compute_regions(Arrangement::parse({"y - 1", "y + 1", "x^2 + y^2 - 16"}, xy), 2);
  apply_boundedness(res);
  for (const auto& r : res.regions) {
    const auto& c = res.critical_points[r.members.front()].x;
    const bool outside = c[0] * c[0] + c[1] * c[1] > 16;
    if (outside) CHECK(r.boundedness != Boundedness::bounded);
    else CHECK(r.boundedness == Boundedness::bounded);
  }
}

TEST_CASE("near-helpers at infinity") {
  const std::vector<std::string> uv{"u"};
  const std::vector<Polynomial<double>> polys{parse_polynomial("u^2 - 4", uv)};
  const double near[] = {2.0 + 1e-12};
  const double far[] = {1.0};
  CHECK(detail::near_any_termwise(polys, near, 1e-9));
  CHECK_FALSE(detail::near_any_termwise(polys, far, 1e-9));
  const double dir[] = {1.0};
  CHECK(detail::max_root_modulus(Arrangement::parse({"x^2 - 9", "x - 1"}, {"x"}), dir) == Catch::Approx(3.0));
}
