#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/critical_points.hpp"
#include "region_carver/critical_system.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/flow.hpp"
#include "region_carver/ml_degree.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/parallel.hpp"
#include "region_carver/union_find.hpp"

namespace region_carver {

enum class Boundedness { unknown, bounded, unbounded, undecided };

inline const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::bounded: return "bounded";
    case Boundedness::unbounded: return "unbounded";
    case Boundedness::undecided: return "undecided";
    case Boundedness::unknown: return "unknown";
  }
  return "unknown";
}

struct Region {
  std::size_t id = 0;
  SignVector sigma;
  std::vector<std::size_t> members;  // critical point indices, descending log g
  std::vector<int> mu;               // mu_0 .. mu_n
  int chi = 0;
  Boundedness boundedness = Boundedness::unknown;
};

struct InfinityRepresentative {
  RealVector point;  // u in R^{n-1}
  std::size_t infinity_region = 0;
  std::vector<std::size_t> reached;  // affine region ids hit by the two flows
};

struct ProjectiveFusion {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<InfinityRepresentative> infinity_representatives;
  std::size_t infinity_regions = 0;
  bool heuristic_incomplete = false;
};

struct Diagnostics {
  std::uint64_t seed_used = 0;
  int attempts = 1;
  std::int64_t bezout = 0;
  std::int64_t ml_bound = 0;
  std::size_t paths_converged = 0;
  std::size_t paths_diverged = 0;
  std::size_t paths_failed = 0;
  std::size_t paths_extraneous = 0;
  std::size_t paths_retracked = 0;
  double max_newton_residual = 0.0;
  std::size_t flows = 0;
  std::size_t flow_steps = 0;
  std::size_t flows_unmatched = 0;
  std::size_t flow_breakdowns = 0;
  bool incomplete_graph = false;
  std::vector<std::string> warnings;
};

struct RegionsOptions {
  std::optional<std::vector<int>> s;
  std::optional<int> t;
  std::optional<Polynomial<double>> q;  // fixed quadric; disables retries
  unsigned threads = 1;
  int max_attempts = 5;
  double epsilon = 1e-3;
  SolveOptions solve;
  FlowOptions flow;
};

struct RegionsResult {
  std::vector<Region> regions;
  MorseFunction morse;
  std::vector<CriticalPoint> critical_points;  // real, descending log g
  std::vector<ComplexVector> complex_points;
  Diagnostics diagnostics;
  std::optional<ProjectiveFusion> projective;
  std::optional<double> delta;  // set once boundedness has been classified

  /// Region containing critical point i.
  std::size_t region_of(std::size_t i) const {
    for (const auto& r : regions)
      if (std::find(r.members.begin(), r.members.end(), i) != r.members.end()) return r.id;
    throw std::out_of_range("critical point not in any region");
  }
};

inline int euler_characteristic(const std::vector<int>& mu) {
  int chi = 0;
  for (std::size_t l = 0; l < mu.size(); ++l) chi += (l % 2 == 0 ? 1 : -1) * mu[l];
  return chi;
}

namespace detail {

struct FlowTask {
  std::size_t from;
  RealVector start;
};

struct FlowOutcome {
  std::optional<std::size_t> limit;
  std::size_t steps = 0;
  bool breakdown = false;
};

// Start point p + eps * dir, shrinking eps until it shares the sign vector of p.
inline std::optional<RealVector> perturbed_start(const MorseFunction& m, const CriticalPoint& p, const RealVector& dir,
                                                 double sign, double eps_scale) {
  double eps = eps_scale * (1.0 + norm2(p.x));
  for (int attempt = 0; attempt < 4; ++attempt, eps /= 10.0) {
    RealVector x = p.x;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += sign * eps * dir[i];
    try {
      if (m.signs(x) == p.sigma) return x;
    } catch (const OnHypersurfaceError&) {
    }
  }
  return std::nullopt;
}

inline RegionsResult run_pipeline(const MorseFunction& m, std::uint64_t seed, const RegionsOptions& opt) {
  RegionsResult res{{}, m, {}, {}, {}, std::nullopt, std::nullopt};
  auto& diag = res.diagnostics;
  const CriticalSystem cs = assemble_critical_system(m);
  SolveOptions sopt = opt.solve;
  sopt.threads = opt.threads;
  const SolveResult sol = solve_critical_points(cs, seed, sopt);
  diag.bezout = sol.bezout;
  diag.ml_bound = ml_degree_bound(m.degrees(), static_cast<int>(m.n())).bound;
  diag.paths_converged = sol.converged;
  diag.paths_diverged = sol.diverged;
  diag.paths_failed = sol.failed;
  diag.paths_extraneous = sol.extraneous;
  diag.paths_retracked = sol.retracked;
  diag.max_newton_residual = sol.max_residual;
  res.complex_points = sol.points;
  res.critical_points = real_critical_points(m, sol.points);
  const auto& crit = res.critical_points;
  if (crit.empty()) throw RegenerateQError("no real critical points were found");

  std::map<SignVector, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < crit.size(); ++i) groups[crit[i].sigma].push_back(i);

  UnionFind uf(crit.size());
  std::vector<FlowTask> tasks;
  for (const auto& [sigma, idx] : groups) {
    std::vector<std::size_t> maxima;
    for (std::size_t i : idx)
      if (crit[i].index == 0) maxima.push_back(i);
    if (maxima.size() == 1) {
      for (std::size_t i : idx) uf.unite(i, maxima.front());
      continue;
    }
    for (std::size_t i : idx) {
      const auto& p = crit[i];
      if (p.index == 0) continue;
      const RealVector& v = p.unstable_eigenvectors.back();
      for (double sign : p.index == 1 ? std::vector<double>{1.0, -1.0} : std::vector<double>{1.0}) {
        if (auto x = perturbed_start(m, p, v, sign, opt.epsilon)) {
          tasks.push_back({i, std::move(*x)});
        } else {
          diag.incomplete_graph = true;
          ++diag.flow_breakdowns;
        }
      }
    }
  }

  std::vector<FlowOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), opt.threads, [&](std::size_t t) {
    try {
      const FlowResult fr = flow_to_critical_point(m, tasks[t].start, crit, opt.flow);
      outcomes[t].limit = fr.limit_index;
      outcomes[t].steps = fr.trajectory_len;
    } catch (const FlowBreakdownError&) {
      outcomes[t].breakdown = true;
    } catch (const OnHypersurfaceError&) {
      outcomes[t].breakdown = true;
    }
  });
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    ++diag.flows;
    diag.flow_steps += outcomes[t].steps;
    if (outcomes[t].breakdown) {
      ++diag.flow_breakdowns;
      diag.incomplete_graph = true;
    } else if (!outcomes[t].limit) {
      ++diag.flows_unmatched;
      diag.incomplete_graph = true;
    } else if (crit[*outcomes[t].limit].sigma != crit[tasks[t].from].sigma) {
      ++diag.flow_breakdowns;
      diag.incomplete_graph = true;
    } else {
      uf.unite(tasks[t].from, *outcomes[t].limit);
    }
  }

  const std::size_t n = m.n();
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < crit.size(); ++i) components[uf.find(i)].push_back(i);
  for (auto& [root, members] : components) {
    Region r;
    r.sigma = crit[members.front()].sigma;
    r.members = members;  // crit is sorted by descending log g already
    r.mu.assign(n + 1, 0);
    for (std::size_t i : members) ++r.mu[static_cast<std::size_t>(crit[i].index)];
    r.chi = euler_characteristic(r.mu);
    if (r.mu[0] == 0) {
      diag.incomplete_graph = true;
      diag.warnings.push_back("a component without a local maximum was found for sigma " + r.sigma.to_string());
    }
    res.regions.push_back(std::move(r));
  }
  std::sort(res.regions.begin(), res.regions.end(), [&](const Region& a, const Region& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    return crit[a.members.front()].log_g > crit[b.members.front()].log_g;
  });
  for (std::size_t i = 0; i < res.regions.size(); ++i) res.regions[i].id = i;
  if (static_cast<std::int64_t>(res.regions.size()) > diag.ml_bound && m.s() == std::vector<int>(m.k(), 1))
    diag.warnings.push_back("region count exceeds the ML degree bound");
  return res;
}

}  // namespace detail

/// Algorithm 1: critical points of log g, grouped by sign vector and joined
/// by ascending flows out of the saddles. Retries with a fresh quadric when
/// the Morse function turns out degenerate.
inline RegionsResult compute_regions(const Arrangement& arr, std::uint64_t seed, const RegionsOptions& opt = {}) {
  std::vector<std::string> warnings;
  const int attempts = opt.q ? 1 : std::max(1, opt.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    const MorseFunction m = opt.q ? build_morse_function_with_quadric(arr, *opt.q, opt.s, opt.t)
                                  : build_morse_function(arr, s, opt.s, opt.t);
    try {
      RegionsResult res = detail::run_pipeline(m, s, opt);
      res.diagnostics.seed_used = s;
      res.diagnostics.attempts = attempt + 1;
      warnings.insert(warnings.end(), res.diagnostics.warnings.begin(), res.diagnostics.warnings.end());
      res.diagnostics.warnings = std::move(warnings);
      return res;
    } catch (const RegenerateQError& e) {
      if (attempt + 1 == attempts) throw;
      warnings.push_back(std::string("regenerated q after: ") + e.what());
    }
  }
  throw RegenerateQError("no admissible quadric found");
}

/// Critical points of a region, descending log g.
inline std::vector<CriticalPoint> critical_points_of(const RegionsResult& res, const Region& region) {
  std::vector<CriticalPoint> out;
  out.reserve(region.members.size());
  for (std::size_t i : region.members) out.push_back(res.critical_points[i]);
  return out;
}

/// Region containing the point p, found by flowing p up to a local maximum.
inline const Region& membership(const RegionsResult& res, std::span<const double> p, const FlowOptions& opt = {}) {
  if (p.size() != res.morse.n()) throw DimensionError("point has wrong dimension");
  const SignVector sigma = res.morse.signs(p);
  const FlowResult fr = flow_to_critical_point(res.morse, p, res.critical_points, opt);
  if (!fr.limit_index) throw FlowBreakdownError("flow from the query point did not reach a critical point");
  const Region& r = res.regions[res.region_of(*fr.limit_index)];
  if (r.sigma != sigma) throw FlowBreakdownError("flow from the query point changed sign vector");
  return r;
}

inline const Region& membership(const RegionsResult& res, const RealVector& p, const FlowOptions& opt = {}) {
  return membership(res, std::span<const double>(p), opt);
}

}  // namespace region_carver
