#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "region_carver/arrangement.hpp"
#include "region_carver/critical_system.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/parallel.hpp"
#include "region_carver/path_tracker.hpp"
#include "region_carver/random.hpp"

namespace region_carver {

struct SolveOptions {
  TrackerOptions tracker;
  unsigned threads = 1;
  double failure_budget = 0.05;
  double dedup_tol = 1e-6;
  double extraneous_floor = 1e-8;
};

struct SolveResult {
  std::vector<ComplexVector> points;  // deduplicated finite critical points
  std::vector<PathTrackRecord> records;
  std::int64_t bezout = 0;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  std::size_t extraneous = 0;
  std::size_t retracked = 0;
  double max_residual = 0.0;
};

namespace detail {

using C = std::complex<double>;

// Newton on the affine cleared system; returns the last relative update.
inline double refine_affine(const ClearedSystemEvaluator& ev, ComplexVector& x, int iterations) {
  const std::size_t n = x.size();
  std::vector<C> r(n);
  Matrix<C> jac(n, n);
  double last = HUGE_VAL;
  for (int it = 0; it < iterations; ++it) {
    ev.evaluate_affine(x, r, &jac);
    for (auto& v : r) v = -v;
    if (!lu_solve(jac, std::span<C>(r))) return HUGE_VAL;
    const double dn = norm2(std::span<const C>(r));
    if (!std::isfinite(dn)) return HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i) x[i] += r[i];
    last = dn / (1.0 + norm2(std::span<const C>(x)));
    if (last < 1e-15) break;
  }
  return last;
}

inline bool is_extraneous(const MorseFunction& m, const ComplexVector& x, double rel) {
  const double r = norm2(std::span<const C>(x));
  const auto& f = m.arrangement().polys;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (std::abs(f[j](x)) < m.floor(j, r, rel)) return true;
  const double qfloor = rel * m.q().max_abs_coefficient() * (1.0 + r * r);
  return std::abs(m.q()(x)) < qfloor;
}

inline PathTrackRecord finish_path(const TotalDegreeHomotopy& h, const ClearedSystemEvaluator& ev,
                                   const TrackOutcome& t, ComplexVector start, const TrackerOptions& opt) {
  PathTrackRecord rec;
  rec.start = std::move(start);
  rec.steps = t.steps;
  // stalls far from the target system are genuine failures
  if (!t.reached_end && (t.tau < 1.0 - opt.endgame_zone || t.steps > opt.max_steps)) return rec;
  const double scale = norm2(std::span<const C>(t.X));
  if (std::abs(t.X[0]) < opt.infinity_ratio * scale) {
    rec.status = PathStatus::diverged;
    return rec;
  }
  ComplexVector x(h.n());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = t.X[i + 1] / t.X[0];
  const ComplexVector stalled = x;
  rec.newton_residual = refine_affine(ev, x, opt.refine_iterations);
  const double xn = norm2(std::span<const C>(x));
  // a stalled path only counts if Newton stays near where tracking stopped
  const bool nearby = t.reached_end || distance(stalled, x) < 1e-3 * (1.0 + xn);
  if (rec.newton_residual < 1e-10 && xn < 1e10 && nearby) {
    rec.status = PathStatus::converged;
    rec.end = std::move(x);
  } else {
    rec.status = PathStatus::diverged;
  }
  return rec;
}

inline ComplexVector affine_of(const std::vector<C>& X) {
  ComplexVector x(X.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = X[i + 1] / X[0];
  return x;
}

// Lexicographic order on coordinates rounded to the dedup resolution.
inline bool rounded_less(const ComplexVector& a, const ComplexVector& b) {
  auto key = [](double v) { return std::round(v * 1e6); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (key(a[i].real()) != key(b[i].real())) return key(a[i].real()) < key(b[i].real());
    if (key(a[i].imag()) != key(b[i].imag())) return key(a[i].imag()) < key(b[i].imag());
  }
  return false;
}

}  // namespace detail

/// Total-degree homotopy for the cleared critical system. Endpoints are
/// refined, extraneous zeros of the denominators discarded, and the rest
/// deduplicated.
inline SolveResult solve_critical_points(const CriticalSystem& cs, std::uint64_t seed, const SolveOptions& opt = {}) {
  using C = std::complex<double>;
  const MorseFunction& m = cs.source;
  const std::size_t n = m.n();
  const ClearedSystemEvaluator ev(cs);

  Rng rng(derive_seed(seed, 0x484f4d));
  const C gamma = rng.unit_complex();
  std::vector<C> c(n), patch(n + 1);
  for (auto& v : c) v = rng.unit_complex();
  for (auto& v : patch) v = rng.complex_normal();
  const TotalDegreeHomotopy h(ev, gamma, c, patch);

  const std::size_t total = h.path_count();
  SolveResult res;
  res.bezout = cs.bezout;
  res.records.resize(total);

  auto run = [&](std::size_t p, const TrackerOptions& topt) {
    auto X = h.start_point(p);
    const TrackOutcome t = track_path(h, X, topt);
    res.records[p] = detail::finish_path(h, ev, t, detail::affine_of(X), topt);
  };
  parallel_for(total, opt.threads, [&](std::size_t p) { run(p, opt.tracker); });

  auto collect = [&](std::vector<std::size_t>& suspicious) {
    std::vector<std::size_t> good;
    for (std::size_t p = 0; p < total; ++p) {
      const auto& r = res.records[p];
      if (r.status == PathStatus::failed) suspicious.push_back(p);
      if (r.status == PathStatus::converged && !detail::is_extraneous(m, r.end, opt.extraneous_floor)) good.push_back(p);
    }
    std::stable_sort(good.begin(), good.end(), [&](std::size_t a, std::size_t b) {
      return detail::rounded_less(res.records[a].end, res.records[b].end);
    });
    // clusters of endpoints closer than the dedup radius
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t p : good) {
      const auto& x = res.records[p].end;
      const double tol = opt.dedup_tol * (1.0 + norm2(std::span<const C>(x)));
      bool placed = false;
      for (auto& cl : clusters) {
        if (distance(res.records[cl.front()].end, x) < tol) {
          cl.push_back(p);
          placed = true;
          break;
        }
      }
      if (!placed) clusters.push_back({p});
    }
    return clusters;
  };

  std::vector<std::size_t> suspicious;
  auto clusters = collect(suspicious);
  for (const auto& cl : clusters)
    if (cl.size() > 1) suspicious.insert(suspicious.end(), cl.begin(), cl.end());
  if (!suspicious.empty()) {
    std::sort(suspicious.begin(), suspicious.end());
    const TrackerOptions tight = opt.tracker.tightened();
    parallel_for(suspicious.size(), opt.threads, [&](std::size_t i) { run(suspicious[i], tight); });
    res.retracked = suspicious.size();
    suspicious.clear();
    clusters = collect(suspicious);
  }

  for (const auto& r : res.records) {
    if (r.status == PathStatus::converged) ++res.converged;
    else if (r.status == PathStatus::diverged) ++res.diverged;
    else ++res.failed;
  }
  std::size_t good_count = 0;
  for (const auto& cl : clusters) {
    good_count += cl.size();
    const auto best = *std::min_element(cl.begin(), cl.end(), [&](std::size_t a, std::size_t b) {
      return res.records[a].newton_residual < res.records[b].newton_residual;
    });
    res.points.push_back(res.records[best].end);
    res.max_residual = std::max(res.max_residual, res.records[best].newton_residual);
  }
  res.extraneous = res.converged - good_count;
  if (static_cast<double>(res.failed) > opt.failure_budget * static_cast<double>(total))
    throw PathFailureError("too many homotopy paths failed", res.failed, total);
  return res;
}

/// Real critical point of log g with its Hessian data.
struct CriticalPoint {
  RealVector x;
  double log_g = 0.0;
  int index = 0;
  RealVector eigenvalues;                       // ascending
  std::vector<RealVector> unstable_eigenvectors;  // ascending eigenvalue order
  SignVector sigma;
};

inline constexpr double kDegeneracyFloor = 1e-8;

/// Newton iteration on grad log g = 0 from a nearby real point.
inline RealVector polish_critical_point(const MorseFunction& m, RealVector x, int iterations = 8) {
  const std::size_t n = x.size();
  for (int it = 0; it < iterations; ++it) {
    const LogGradient lg = m.evaluate(x, true);
    RealVector step = lg.grad;
    for (auto& v : step) v = -v;
    if (!lu_solve(*lg.hessian, std::span<double>(step))) break;
    for (std::size_t i = 0; i < n; ++i) x[i] += step[i];
    if (norm2(step) < 1e-15 * (1.0 + norm2(x))) break;
  }
  return x;
}

inline CriticalPoint classify_critical_point(const MorseFunction& m, std::span<const double> x) {
  CriticalPoint cp;
  cp.x.assign(x.begin(), x.end());
  const LogGradient lg = m.evaluate(x, true);
  if (norm2(lg.grad) >= 1e-8 * (1.0 + norm2(x)))
    throw std::invalid_argument("point is not a critical point of log g");
  cp.log_g = lg.value;
  const SymmetricEigen eig = jacobi_eigen(*lg.hessian);
  cp.eigenvalues = eig.values;
  double radius = 0.0;
  for (double v : eig.values) radius = std::max(radius, std::abs(v));
  const std::size_t n = x.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double v = eig.values[j];
    if (std::abs(v) < kDegeneracyFloor * radius || v == 0.0)
      throw RegenerateQError("degenerate Hessian at a critical point");
    if (v > 0.0) {
      ++cp.index;
      RealVector u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = eig.vectors(i, j);
      const double un = norm2(u);
      for (auto& c : u) c /= un;
      const auto first = std::find_if(u.begin(), u.end(), [](double c) { return std::abs(c) > 1e-14; });
      if (first != u.end() && *first < 0)
        for (auto& c : u) c = -c;
      cp.unstable_eigenvectors.push_back(std::move(u));
    }
  }
  cp.sigma = m.signs(x);
  return cp;
}

inline CriticalPoint classify_critical_point(const MorseFunction& m, const RealVector& x) {
  return classify_critical_point(m, std::span<const double>(x));
}

/// Keeps the numerically real points, polishes and classifies them, and
/// returns them sorted by descending log g.
inline std::vector<CriticalPoint> real_critical_points(const MorseFunction& m, const std::vector<ComplexVector>& pts,
                                                       double dedup_tol = 1e-6) {
  std::vector<CriticalPoint> out;
  for (const auto& z : pts) {
    double im = 0.0;
    RealVector x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      im = std::max(im, std::abs(z[i].imag()));
      x[i] = z[i].real();
    }
    if (im >= 1e-8 * (1.0 + norm2(x))) continue;
    x = polish_critical_point(m, std::move(x));
    const bool seen = std::any_of(out.begin(), out.end(), [&](const CriticalPoint& c) {
      return distance(c.x, x) < dedup_tol * (1.0 + norm2(x));
    });
    if (!seen) out.push_back(classify_critical_point(m, x));
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.log_g != b.log_g) return a.log_g > b.log_g;
    return a.x < b.x;
  });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (std::abs(out[i - 1].log_g - out[i].log_g) <= 1e-9)
      throw RegenerateQError("two critical points share a critical value");
  return out;
}

}  // namespace region_carver
