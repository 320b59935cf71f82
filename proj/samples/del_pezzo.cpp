// Lines through pairs and conics through fives of six points in convex
// position; the blow-up picture of a real cubic surface with its 27 lines.
//
//   del_pezzo [x1,y1 x2,y2 ... x6,y6] [--seed N] [--threads N]
//
// Expected for a general configuration: 145 regions, all contractible, 115
// bounded and 30 unbounded, 130 after fusing across the line at infinity.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "region_carver/generators.hpp"
#include "region_carver/projective.hpp"
#include "region_carver/regions.hpp"

using namespace region_carver;

namespace {

using Point = std::pair<double, double>;

Polynomial<double> line_through(Point a, Point b) {
  const auto x = Polynomial<double>::variable(2, 0), y = Polynomial<double>::variable(2, 1);
  return x * (a.second - b.second) + y * (b.first - a.first) +
         Polynomial<double>::constant(2, a.first * b.second - a.second * b.first);
}

// det [m(x, y); m(p_1); ...; m(p_5)] with m = (x^2, xy, y^2, x, y, 1)
Polynomial<double> conic_through(const std::vector<Point>& p) {
  const auto x = Polynomial<double>::variable(2, 0), y = Polynomial<double>::variable(2, 1);
  const auto one = Polynomial<double>::constant(2, 1.0);
  std::vector<std::vector<Polynomial<double>>> rows{{x * x, x * y, y * y, x, y, one}};
  for (const auto& [a, b] : p) {
    std::vector<Polynomial<double>> row;
    for (double v : {a * a, a * b, b * b, a, b, 1.0}) row.push_back(Polynomial<double>::constant(2, v));
    rows.push_back(std::move(row));
  }
  auto c = polynomial_determinant(rows, 2);
  c *= 1.0 / c.max_abs_coefficient();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Point> pts{{-0.77778, -0.85185}, {0.33333, -1.22222}, {1.44444, -0.48148},
                         {1.07407, 0.62963},   {-0.40741, 1.0},      {-1.51852, 0.25926}};
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<Point> given;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    else if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) threads = static_cast<unsigned>(std::atoi(argv[++i]));
    else {
      double a, b;
      if (std::sscanf(argv[i], "%lf,%lf", &a, &b) != 2) {
        std::fprintf(stderr, "bad point '%s'\n", argv[i]);
        return 1;
      }
      given.emplace_back(a, b);
    }
  }
  if (!given.empty()) {
    if (given.size() != 6) {
      std::fprintf(stderr, "need exactly six points\n");
      return 1;
    }
    pts = given;
  }

  std::vector<Polynomial<double>> polys;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) polys.push_back(line_through(pts[i], pts[j]));
  for (std::size_t skip = 0; skip < 6; ++skip) {
    std::vector<Point> five;
    for (std::size_t i = 0; i < 6; ++i)
      if (i != skip) five.push_back(pts[i]);
    polys.push_back(conic_through(five));
  }
  const auto arr = Arrangement::make(std::move(polys), {"x", "y"});

  const auto t0 = std::chrono::steady_clock::now();
  try {
    RegionsOptions opt;
    opt.threads = threads;
    opt.solve.threads = threads;
    auto res = compute_regions(arr, seed, opt);
    ProjectiveOptions popt;
    popt.threads = threads;
    res.projective = compute_projective_regions(res, popt);
    apply_boundedness(res, 1e-5, popt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::map<Boundedness, int> tally;
    int contractible = 0;
    for (const auto& r : res.regions) {
      ++tally[r.boundedness];
      contractible += r.chi == 1;
    }
    std::printf("regions            %zu (expected 145)\n", res.regions.size());
    std::printf("chi = 1            %d\n", contractible);
    std::printf("bounded            %d (expected 115)\n", tally[Boundedness::bounded]);
    std::printf("unbounded          %d (expected 30)\n", tally[Boundedness::unbounded]);
    std::printf("undecided          %d\n", tally[Boundedness::undecided]);
    std::printf("projective regions %zu (expected 130)\n", res.projective->groups.size());
    std::printf("complex critical   %zu, real %zu, ML bound %lld\n", res.complex_points.size(),
                res.critical_points.size(), static_cast<long long>(res.diagnostics.ml_bound));
    const auto& d = res.diagnostics;
    std::printf("paths              %zu converged, %zu diverged, %zu failed, %zu extraneous of %lld\n", d.paths_converged,
                d.paths_diverged, d.paths_failed, d.paths_extraneous, static_cast<long long>(d.bezout));
    std::printf("time               %.1f s\n", secs);
    for (const auto& w : res.diagnostics.warnings) std::printf("warning: %s\n", w.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
