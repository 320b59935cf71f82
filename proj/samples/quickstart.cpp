// Regions of two nested circles cut by a line.

#include <cstdio>

#include "region_carver/projective.hpp"
#include "region_carver/regions.hpp"

using namespace region_carver;

int main() {
  const auto arr = Arrangement::parse({"x^2 + y^2 - 1", "x^2 + y^2 - 4", "x - y/2"}, {"x", "y"});
  auto res = compute_regions(arr, 1);
  apply_boundedness(res);
  std::printf("%zu regions, ML bound %lld\n", res.regions.size(), static_cast<long long>(res.diagnostics.ml_bound));
  for (const auto& r : res.regions) {
    const auto& top = res.critical_points[r.members.front()].x;
    std::printf("  region %zu  sigma %s  chi %2d  %-9s  max of g at (%.3f, %.3f)\n", r.id, r.sigma.to_string().c_str(),
                r.chi, to_string(r.boundedness), top[0], top[1]);
  }
  const Region& r = membership(res, RealVector{0.0, 1.5});
  std::printf("(0, 1.5) lies in region %zu\n", r.id);
}
