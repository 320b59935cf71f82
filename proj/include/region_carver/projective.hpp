#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/critical_points.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/flow.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/parallel.hpp"
#include "region_carver/polynomial.hpp"
#include "region_carver/random.hpp"
#include "region_carver/regions.hpp"
#include "region_carver/union_find.hpp"
#include "region_carver/univariate_roots.hpp"

namespace region_carver {

struct ProjectiveOptions {
  unsigned threads = 1;
  double representative_floor = 1e-6;
  double slab_floor = 1e-9;
  double slab_continuation_start = 1e-2;
  std::size_t slab_flow_steps = 20000;
  FlowOptions flow;
  SolveOptions solve;
};

struct BoundednessReport {
  std::vector<Boundedness> status;  // by region id
  double delta = 1e-5;
  std::vector<std::size_t> slab_points;  // restricted critical points per side (+, -)
  std::vector<std::string> warnings;
};

namespace detail {

inline double max_root_modulus(const Arrangement& arr, std::span<const double> dir) {
  double r = 0.0;
  for (const auto& f : arr.polys) {
    const auto c = ray_polynomial(f, dir);
    bool nonconstant = false;
    for (std::size_t i = 1; i < c.size(); ++i) nonconstant |= c[i] != 0.0;
    if (!nonconstant) continue;
    for (const auto& z : roots_of_univariate(c)) r = std::max(r, std::abs(z));
  }
  return r;
}

// Largest real root in (0, limit) over all t -> f_j(t * dir), or 0.
inline double largest_root_below(const Arrangement& arr, std::span<const double> dir, double limit) {
  double best = 0.0;
  for (const auto& f : arr.polys) {
    const auto c = ray_polynomial(f, dir);
    bool nonconstant = false;
    for (std::size_t i = 1; i < c.size(); ++i) nonconstant |= c[i] != 0.0;
    if (!nonconstant) continue;
    for (const auto& z : roots_of_univariate(c))
      if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z)) && z.real() > 0.0 && z.real() < limit)
        best = std::max(best, z.real());
  }
  return best;
}

// Drops constant chart polynomials and repeats up to scaling.
inline std::vector<Polynomial<double>> distinct_nonconstant(const std::vector<Polynomial<double>>& polys,
                                                            std::vector<std::string>* warnings) {
  std::vector<Polynomial<double>> out;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto& h = polys[j];
    if (h.is_zero()) {
      if (warnings) warnings->push_back("f_" + std::to_string(j + 1) + " vanishes on the chart at infinity; dropped");
      continue;
    }
    if (h.is_constant()) continue;
    if (std::any_of(out.begin(), out.end(), [&](const Polynomial<double>& o) { return proportional(o, h); })) continue;
    out.push_back(h);
  }
  return out;
}

inline bool near_any(const std::vector<Polynomial<double>>& polys, std::span<const double> u, double rel) {
  for (const auto& h : polys)
    if (std::abs(h(u)) < hypersurface_floor(h, u, rel)) return true;
  return false;
}

// |h(u)| small against the size of its terms at u, sum |c| |u^a|.
inline bool near_any_termwise(const std::vector<Polynomial<double>>& polys, std::span<const double> u, double rel) {
  for (const auto& h : polys) {
    double size = 0.0;
    for (const auto& [mono, c] : h.terms()) {
      double t = std::abs(c);
      for (std::size_t i = 0; i < u.size(); ++i) t *= std::pow(std::abs(u[i]), mono[i]);
      size += t;
    }
    if (std::abs(h(u)) < rel * size) return true;
  }
  return false;
}

// Start point lambda * dir pushed outward until it is clear of every f_j.
inline std::optional<RealVector> ray_start(const MorseFunction& m, std::span<const double> dir, double lambda) {
  for (int attempt = 0; attempt < 6; ++attempt, lambda *= 1.5) {
    RealVector x(dir.begin(), dir.end());
    for (auto& v : x) v *= lambda;
    if (m.near_hypersurface(x, 1e-8) < 0) return x;
  }
  return std::nullopt;
}

// Real critical points of sum s_j log|h_j| - t log q in the chart variables,
// polished but not classified.
inline std::vector<RealVector> restricted_critical_points(const std::vector<Polynomial<double>>& hs,
                                                          const std::vector<int>& s, const Polynomial<double>& q, int t,
                                                          std::uint64_t seed, const SolveOptions& sopt) {
  const std::size_t n = q.nvars();
  if (n == 0) return {RealVector{}};
  if (hs.empty()) {
    // minimum of q: solve grad q = 0
    Matrix<double> a(n, n);
    RealVector b(n);
    const RealVector zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto di = differentiate(q, i);
      b[i] = -di(zero);
      for (std::size_t j = 0; j < n; ++j) a(i, j) = differentiate(di, j)(zero);
    }
    if (!lu_solve(a, std::span<double>(b))) return {};
    return {b};
  }
  const MorseFunction rm(Arrangement::make(hs), q, s, t, seed);
  const SolveResult sol = solve_critical_points(assemble_critical_system(rm), seed, sopt);
  std::vector<RealVector> out;
  for (const auto& z : sol.points) {
    RealVector x(n);
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = z[i].real();
      im = std::max(im, std::abs(z[i].imag()));
    }
    if (im >= 1e-8 * (1.0 + norm2(x))) continue;
    try {
      out.push_back(polish_critical_point(rm, std::move(x)));
    } catch (const OnHypersurfaceError&) {
    }
  }
  return out;
}


struct SlabSystem {
  std::vector<Polynomial<double>> hs;
  std::vector<int> s;
  Polynomial<double> q;
};

// The arrangement and quadric on the wall x_1 = side / delta, in the
// coordinates u = delta * (x_2, ..., x_n).
inline SlabSystem slab_system(const MorseFunction& m, double delta, double side) {
  const double lead[2] = {delta, side};
  SlabSystem sys;
  const auto& arr = m.arrangement();
  for (std::size_t j = 0; j < arr.k(); ++j) {
    auto h = substitute_leading(homogenize(arr.polys[j]), std::span<const double>(lead, 2));
    if (h.is_constant() || h.is_zero()) continue;
    sys.hs.push_back(std::move(h));
    sys.s.push_back(m.s()[j]);
  }
  sys.q = substitute_leading(homogenize(m.q()), std::span<const double>(lead, 2));
  return sys;
}

// Follows a slab critical point from delta = from down to delta = to with a
// secant predictor in 1/delta and Newton on the gradient.
inline std::optional<RealVector> continue_slab_point(const MorseFunction& m, double side, RealVector u, double from,
                                                     double to) {
  std::optional<RealVector> prev;
  double d = from, d_prev = from;
  double ratio = 2.0;
  while (d > to) {
    const double next = std::max(d / ratio, to);
    RealVector guess = u;
    if (prev) {
      const double w = (1.0 / next - 1.0 / d) / (1.0 / d - 1.0 / d_prev);
      for (std::size_t i = 0; i < u.size(); ++i) guess[i] += w * (u[i] - (*prev)[i]);
    }
    bool ok = false;
    try {
      const SlabSystem here = slab_system(m, d, side), there = slab_system(m, next, side);
      const MorseFunction before(Arrangement::make(here.hs), here.q, here.s, m.t());
      const MorseFunction after(Arrangement::make(there.hs), there.q, there.s, m.t());
      RealVector v = polish_critical_point(after, guess);
      const double scale = 1.0 + norm2(v);
      ok = norm2(after.evaluate(v).grad) * scale < 1e-7 && after.signs(v) == before.signs(u) &&
           distance(std::span<const double>(v), std::span<const double>(guess)) < 0.1 * scale;
      if (ok) {
        prev = std::move(u);
        u = std::move(v);
        d_prev = d;
        d = next;
        ratio = std::min(2.0, ratio * 1.2);
      }
    } catch (const Error&) {
    } catch (const std::invalid_argument&) {
    }
    if (!ok) {
      ratio = std::sqrt(ratio);
      if (ratio < 1.01) return std::nullopt;
    }
  }
  return u;
}
}  // namespace detail

/// Algorithm 2: regions of the arrangement at infinity supply directions;
/// the two affine regions reached by flowing in from both ends of each
/// direction belong to the same projective region.
inline ProjectiveFusion compute_projective_regions(const RegionsResult& res, const ProjectiveOptions& opt = {}) {
  const MorseFunction& m = res.morse;
  const Arrangement& arr = m.arrangement();
  const std::size_t n = m.n();
  ProjectiveFusion fusion;
  std::vector<std::string> warnings;

  std::vector<Polynomial<double>> chart;
  for (const auto& f : arr.polys) chart.push_back(restrict_chart(homogenize(f)));
  const auto hs = detail::distinct_nonconstant(chart, &warnings);

  std::vector<RealVector> reps;
  std::vector<std::size_t> rep_region;
  if (n == 1 || hs.empty()) {
    fusion.infinity_regions = 1;
    reps.push_back(RealVector(n - 1, 0.0));
    rep_region.push_back(0);
  } else {
    RegionsOptions ropt;
    ropt.threads = opt.threads;
    ropt.flow = opt.flow;
    ropt.solve = opt.solve;
    const Arrangement inf = Arrangement::make(hs);
    const RegionsResult ires = compute_regions(inf, derive_seed(res.diagnostics.seed_used, 0x494e46), ropt);
    fusion.infinity_regions = ires.regions.size();
    for (const auto& r : ires.regions) {
      bool found = false;
      for (std::size_t i : r.members) {
        const auto& cp = ires.critical_points[i];
        if (cp.index != 0 || detail::near_any(hs, cp.x, opt.representative_floor)) continue;
        reps.push_back(cp.x);
        rep_region.push_back(r.id);
        found = true;
        break;
      }
      if (!found) fusion.heuristic_incomplete = true;
    }
  }

  struct Task {
    std::size_t rep;
    RealVector start;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    RealVector dir(n);
    dir[0] = 1.0;
    std::copy(reps[i].begin(), reps[i].end(), dir.begin() + 1);
    const double lambda = 2.0 * (1.0 + detail::max_root_modulus(arr, dir));
    for (double sign : {1.0, -1.0}) {
      RealVector d = dir;
      for (auto& v : d) v *= sign;
      if (auto x = detail::ray_start(m, d, lambda)) tasks.push_back({i, std::move(*x)});
      else fusion.heuristic_incomplete = true;
    }
  }
  std::vector<std::optional<std::size_t>> limits(tasks.size());
  parallel_for(tasks.size(), opt.threads, [&](std::size_t t) {
    try {
      const FlowResult fr = flow_to_critical_point(m, tasks[t].start, res.critical_points, opt.flow);
      if (fr.limit_index) limits[t] = res.region_of(*fr.limit_index);
    } catch (const FlowBreakdownError&) {
    } catch (const OnHypersurfaceError&) {
    }
  });

  UnionFind uf(res.regions.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    InfinityRepresentative ir{reps[i], rep_region[i], {}};
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].rep != i) continue;
      if (!limits[t]) {
        fusion.heuristic_incomplete = true;
        continue;
      }
      ir.reached.push_back(*limits[t]);
    }
    for (std::size_t j = 1; j < ir.reached.size(); ++j) uf.unite(ir.reached[0], ir.reached[j]);
    fusion.infinity_representatives.push_back(std::move(ir));
  }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t r = 0; r < res.regions.size(); ++r) comps[uf.find(r)].push_back(r);
  for (auto& [root, ids] : comps) fusion.groups.push_back(ids);
  std::sort(fusion.groups.begin(), fusion.groups.end());
  return fusion;
}

/// Bounded / unbounded / undecided per region. Regions reached from infinity
/// are unbounded; regions reached from the slab walls x_1 = +-1/delta are
/// undecided; the rest are bounded if their critical points lie inside the
/// slab.
inline BoundednessReport classify_boundedness(const RegionsResult& res, double delta = 1e-5,
                                              const ProjectiveOptions& opt = {}) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const MorseFunction& m = res.morse;
  const Arrangement& arr = m.arrangement();
  const std::size_t n = m.n();
  BoundednessReport rep;
  rep.delta = delta;
  const ProjectiveFusion fusion = res.projective ? *res.projective : compute_projective_regions(res, opt);

  std::vector<bool> unbounded(res.regions.size(), false), slab(res.regions.size(), false);
  for (const auto& ir : fusion.infinity_representatives)
    for (std::size_t r : ir.reached) unbounded[r] = true;

  std::vector<RealVector> starts;
  const std::uint64_t slab_seed = derive_seed(res.diagnostics.seed_used, 0x534c4142);
  for (double side : {1.0, -1.0}) {
    const detail::SlabSystem sys = detail::slab_system(m, delta, side);
    const auto& hs = sys.hs;
    std::vector<RealVector> pts;
    try {
      pts = detail::restricted_critical_points(hs, sys.s, sys.q, m.t(), slab_seed, opt.solve);
      if (delta < opt.slab_continuation_start && !hs.empty() && n > 1) {
        const detail::SlabSystem coarse = detail::slab_system(m, opt.slab_continuation_start, side);
        const auto from = detail::restricted_critical_points(coarse.hs, coarse.s, coarse.q, m.t(), slab_seed, opt.solve);
        std::size_t lost = 0;
        for (const auto& u : from) {
          const auto v = detail::continue_slab_point(m, side, u, opt.slab_continuation_start, delta);
          if (!v) {
            ++lost;
            continue;
          }
          const bool known = std::any_of(pts.begin(), pts.end(), [&](const RealVector& w) {
            return distance(std::span<const double>(w), std::span<const double>(*v)) < 1e-6 * (1.0 + norm2(w));
          });
          if (!known) pts.push_back(*v);
        }
        if (lost > 0)
          rep.warnings.push_back(std::to_string(lost) + " slab critical points were lost during continuation in delta");
      }
    } catch (const std::exception& e) {
      rep.warnings.push_back(std::string("slab solve failed: ") + e.what());
      for (std::size_t r = 0; r < res.regions.size(); ++r) slab[r] = true;
      continue;
    }
    rep.slab_points.push_back(pts.size());
    for (const auto& u : pts) {
      if (detail::near_any_termwise(hs, u, opt.slab_floor)) continue;
      RealVector dir(n);
      dir[0] = side;
      std::copy(u.begin(), u.end(), dir.begin() + 1);
      const double rmax = detail::largest_root_below(arr, dir, 1.0 / delta);
      const double lambda = rmax > 0.0 ? std::sqrt(rmax / delta) : 0.5 / delta;
      RealVector x = dir;
      for (auto& v : x) v *= lambda;
      if (m.near_hypersurface(x) >= 0) {
        rep.warnings.push_back("slab start point lies near a hypersurface; skipped");
        continue;
      }
      starts.push_back(std::move(x));
    }
  }
  std::vector<std::optional<std::size_t>> limits(starts.size());
  std::vector<bool> failed(starts.size(), false);
  FlowOptions slab_flow = opt.flow;
  slab_flow.max_steps = std::min(slab_flow.max_steps, opt.slab_flow_steps);
  parallel_for(starts.size(), opt.threads, [&](std::size_t t) {
    try {
      const FlowResult fr = flow_to_critical_point(m, starts[t], res.critical_points, slab_flow);
      if (fr.limit_index) limits[t] = res.region_of(*fr.limit_index);
      else failed[t] = true;
    } catch (const std::exception&) {
      failed[t] = true;
    }
  });
  for (std::size_t t = 0; t < starts.size(); ++t) {
    if (limits[t]) slab[*limits[t]] = true;
    if (!failed[t]) continue;
    rep.warnings.push_back("a slab flow did not reach a critical point");
    const SignVector sv = m.signs(starts[t]);
    for (const auto& r : res.regions)
      if (r.sigma == sv) slab[r.id] = true;
  }

  rep.status.assign(res.regions.size(), Boundedness::undecided);
  for (const auto& r : res.regions) {
    if (unbounded[r.id]) {
      rep.status[r.id] = Boundedness::unbounded;
    } else if (!slab[r.id]) {
      const bool inside = std::all_of(r.members.begin(), r.members.end(), [&](std::size_t i) {
        return std::abs(res.critical_points[i].x[0]) < 1.0 / delta;
      });
      if (inside) rep.status[r.id] = Boundedness::bounded;
    }
  }
  return rep;
}

/// Runs the boundedness check and stores the statuses on the regions.
inline void apply_boundedness(RegionsResult& res, double delta = 1e-5, const ProjectiveOptions& opt = {}) {
  if (!res.projective) res.projective = compute_projective_regions(res, opt);
  const BoundednessReport rep = classify_boundedness(res, delta, opt);
  for (auto& r : res.regions) r.boundedness = rep.status[r.id];
  res.delta = delta;
  res.diagnostics.warnings.insert(res.diagnostics.warnings.end(), rep.warnings.begin(), rep.warnings.end());
}

}  // namespace region_carver
