#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "region_carver/flow.hpp"
#include "region_carver/generators.hpp"
#include "region_carver/ode.hpp"
#include "region_carver/regions.hpp"

using namespace region_carver;

TEST_CASE("Dormand-Prince integrates a linear system") {
  // y0' = y1, y1' = -y0 from (1, 0) is (cos t, -sin t)
  DormandPrince45::Options opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  DormandPrince45 ode(
      [](std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
        return true;
      },
      {1.0, 0.0}, opt);
  REQUIRE(ode.ready());
  while (ode.time() < 10.0) REQUIRE(ode.step());
  const double t = ode.time();
  CHECK(ode.state()[0] == Catch::Approx(std::cos(t)).margin(1e-7));
  CHECK(ode.state()[1] == Catch::Approx(-std::sin(t)).margin(1e-7));
}

TEST_CASE("Dormand-Prince exponential decay and growth") {
  for (double rate : {-3.0, 0.5}) {
    DormandPrince45 ode(
        [rate](std::span<const double> y, std::span<double> dy) {
          dy[0] = rate * y[0];
          return true;
        },
        {2.0}, {});
    while (ode.time() < 2.0) REQUIRE(ode.step());
    CHECK(ode.state()[0] == Catch::Approx(2.0 * std::exp(rate * ode.time())).epsilon(1e-6));
  }
}

TEST_CASE("a rejected right-hand side shrinks the step") {
  DormandPrince45 ode(
      [](std::span<const double> y, std::span<double> dy) {
        if (y[0] > 1.5) return false;
        dy[0] = 1.0;
        return true;
      },
      {0.0}, {});
  std::size_t steps = 0;
  while (ode.step() && steps < 100000) ++steps;
  CHECK(ode.state()[0] <= 1.5);
  CHECK(ode.state()[0] > 1.4);
}

TEST_CASE("flows ascend log g and keep their sign vector") {
  const auto& ex = builtin_example("hyperboloid");
  const auto res = compute_regions(Arrangement::parse(ex.polys, ex.vars), 1);
  const auto& m = res.morse;
  std::mt19937_64 g(17);
  std::normal_distribution<double> nd(0.0, 1.0);
  int flows = 0, matched = 0;
  while (flows < 100) {
    RealVector x0(3);
    for (auto& v : x0) v = nd(g);
    if (m.near_hypersurface(x0, 1e-6) >= 0) continue;
    ++flows;
    const SignVector sigma = m.signs(x0);
    double last = -INFINITY;
    bool monotone = true, same_sign = true;
    FlowOptions opt;
    opt.observer = [&](std::span<const double> x, double log_g) {
      monotone = monotone && log_g >= last - 1e-9 * (1 + std::abs(last));
      last = log_g;
      same_sign = same_sign && m.signs(x, 1e-15) == sigma;
    };
    const FlowResult fr = flow_to_critical_point(m, x0, res.critical_points, opt);
    CHECK(monotone);
    CHECK(same_sign);
    CHECK(fr.end_log_g >= fr.start_log_g);
    if (fr.limit_index) {
      ++matched;
      CHECK(res.critical_points[*fr.limit_index].sigma == sigma);
      CHECK(res.critical_points[*fr.limit_index].log_g >= fr.start_log_g);
    }
  }
  CHECK(matched >= 98);
}

TEST_CASE("flows from a local maximum stay there") {
  const auto res = compute_regions(elliptope(), 1);
  for (std::size_t i = 0; i < res.critical_points.size(); ++i) {
    const auto& cp = res.critical_points[i];
    if (cp.index != 0) continue;
    const FlowResult fr = flow_to_critical_point(res.morse, cp.x, res.critical_points);
    REQUIRE(fr.limit_index);
    CHECK(*fr.limit_index == i);
  }
}
