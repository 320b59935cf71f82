#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "region_carver/critical_system.hpp"
#include "region_carver/linalg.hpp"

namespace region_carver {

enum class PathStatus { converged, diverged, failed };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::converged: return "converged";
    case PathStatus::diverged: return "diverged";
    case PathStatus::failed: return "failed";
  }
  return "?";
}

/// One tracked path. start and end are affine; end is empty when the path
/// went to infinity or failed.
struct PathTrackRecord {
  ComplexVector start;
  ComplexVector end;
  PathStatus status = PathStatus::failed;
  std::size_t steps = 0;
  double newton_residual = 0.0;
};

struct TrackerOptions {
  double initial_step = 0.01;
  double max_step = 0.05;
  double min_step = 1e-14;
  int corrector_iterations = 3;
  double corrector_tol = 1e-10;
  int growth_after = 4;
  double growth = 1.5;
  std::size_t max_steps = 100000;
  double infinity_ratio = 1e-10;  // |X_0| / |X| below this counts as infinite
  // near tau = 1 a path needing steps below endgame_ratio * (1 - tau), or more
  // than endgame_steps steps, is handed to the endpoint refinement as is
  double endgame_zone = 1e-3;
  double endgame_ratio = 1e-4;
  std::size_t endgame_steps = 400;
  int refine_iterations = 12;

  TrackerOptions tightened() const {
    TrackerOptions o = *this;
    o.initial_step /= 10.0;
    o.max_step /= 10.0;
    o.max_steps *= 10;
    return o;
  }
};

/// Straight-line homotopy H = (1 - tau) gamma S + tau F in projective
/// coordinates, with S_i = X_i^D - c_i X_0^D and the affine patch a . X = 1.
class TotalDegreeHomotopy {
 public:
  using C = std::complex<double>;

  TotalDegreeHomotopy(const ClearedSystemEvaluator& target, C gamma, std::vector<C> c, std::vector<C> patch)
      : target_(target), gamma_(gamma), c_(std::move(c)), patch_(std::move(patch)) {}

  std::size_t n() const noexcept { return target_.n(); }
  const std::vector<int>& degrees() const noexcept { return target_.degrees(); }
  const std::vector<C>& patch() const noexcept { return patch_; }

  /// Number of start solutions, prod D_i.
  std::size_t path_count() const {
    std::size_t count = 1;
    for (int d : degrees()) count *= static_cast<std::size_t>(d);
    return count;
  }

  /// Start solution number p in projective coordinates on the patch.
  std::vector<C> start_point(std::size_t p) const {
    const std::size_t N = n() + 1;
    std::vector<C> X(N);
    X[0] = 1.0;
    for (std::size_t i = 0; i < n(); ++i) {
      const int D = degrees()[i];
      const auto k = static_cast<double>(p % static_cast<std::size_t>(D));
      p /= static_cast<std::size_t>(D);
      const double angle = (std::arg(c_[i]) + 2.0 * std::numbers::pi * k) / D;
      X[i + 1] = std::pow(std::abs(c_[i]), 1.0 / D) * std::polar(1.0, angle);
    }
    normalize(X);
    return X;
  }

  void normalize(std::vector<C>& X) const {
    C s{};
    for (std::size_t i = 0; i < X.size(); ++i) s += patch_[i] * X[i];
    for (auto& v : X) v /= s;
  }

  /// H(X, tau) (size n+1, last row the patch) and optionally its X-Jacobian
  /// and tau-derivative.
  void evaluate(std::span<const C> X, double tau, std::span<C> h, Matrix<C>* hx, std::span<C> ht) const {
    const std::size_t nn = n();
    const std::size_t N = nn + 1;
    std::vector<C> f(nn);
    Matrix<C> jf;
    if (hx) jf = Matrix<C>(nn, N);
    target_.evaluate(X, f, hx ? &jf : nullptr);
    const C a = gamma_ * (1.0 - tau);
    for (std::size_t i = 0; i < nn; ++i) {
      const int D = degrees()[i];
      const C x0d1 = std::pow(X[0], D - 1);
      const C xid1 = std::pow(X[i + 1], D - 1);
      const C s = xid1 * X[i + 1] - c_[i] * x0d1 * X[0];
      h[i] = a * s + tau * f[i];
      if (!ht.empty()) ht[i] = f[i] - gamma_ * s;
      if (hx) {
        for (std::size_t j = 0; j < N; ++j) (*hx)(i, j) = tau * jf(i, j);
        (*hx)(i, i + 1) += a * static_cast<double>(D) * xid1;
        (*hx)(i, 0) -= a * c_[i] * static_cast<double>(D) * x0d1;
      }
    }
    C p{};
    for (std::size_t j = 0; j < N; ++j) p += patch_[j] * X[j];
    h[nn] = p - 1.0;
    if (!ht.empty()) ht[nn] = 0.0;
    if (hx)
      for (std::size_t j = 0; j < N; ++j) (*hx)(nn, j) = patch_[j];
  }

  /// dX/dtau from the Davidenko equation; false if the Jacobian is singular.
  bool tangent(std::span<const C> X, double tau, std::span<C> out) const {
    const std::size_t N = n() + 1;
    std::vector<C> h(N);
    Matrix<C> hx(N, N);
    evaluate(X, tau, h, &hx, out);
    for (auto& v : out) v = -v;
    return lu_solve(std::move(hx), out) && std::all_of(out.begin(), out.end(), [](C v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
  }

 private:
  const ClearedSystemEvaluator& target_;
  C gamma_;
  std::vector<C> c_;
  std::vector<C> patch_;
};

struct TrackOutcome {
  std::vector<std::complex<double>> X;
  double tau = 0.0;
  bool reached_end = false;
  std::size_t steps = 0;
};

namespace detail {

// Newton on H(., tau) starting from X; returns true once the relative update
// drops below tol within the iteration budget.
inline bool correct(const TotalDegreeHomotopy& h, std::vector<std::complex<double>>& X, double tau, int iterations,
                    double tol) {
  using C = std::complex<double>;
  const std::size_t N = X.size();
  std::vector<C> r(N);
  Matrix<C> hx(N, N);
  double previous = HUGE_VAL;
  for (int it = 0; it < iterations; ++it) {
    h.evaluate(X, tau, r, &hx, {});
    for (auto& v : r) v = -v;
    if (!lu_solve(hx, std::span<C>(r))) return false;
    const double dn = norm2(std::span<const C>(r));
    if (!std::isfinite(dn)) return false;
    for (std::size_t i = 0; i < N; ++i) X[i] += r[i];
    const double scale = norm2(std::span<const C>(X));
    if (dn <= tol * scale) return true;
    if (it > 0 && dn > 0.5 * previous) return false;
    previous = dn;
  }
  return false;
}

}  // namespace detail

/// Tracks one path from tau = 0 to tau = 1 with an RK4 predictor and a
/// Newton corrector under adaptive step control.
inline TrackOutcome track_path(const TotalDegreeHomotopy& h, std::vector<std::complex<double>> X,
                               const TrackerOptions& opt) {
  using C = std::complex<double>;
  const std::size_t N = X.size();
  TrackOutcome out;
  double tau = 0.0;
  double step = opt.initial_step;
  int successes = 0;
  std::size_t endgame = 0;
  std::vector<C> k1(N), k2(N), k3(N), k4(N), tmp(N), trial(N);

  auto axpy = [&](const std::vector<C>& base, double a, const std::vector<C>& k) {
    for (std::size_t i = 0; i < N; ++i) tmp[i] = base[i] + a * k[i];
    return std::span<const C>(tmp);
  };

  while (tau < 1.0) {
    if (++out.steps > opt.max_steps) break;
    if (1.0 - tau < opt.endgame_zone &&
        (++endgame > opt.endgame_steps || step < opt.endgame_ratio * (1.0 - tau)))
      break;
    const double hstep = std::min(step, 1.0 - tau);
    bool ok = h.tangent(X, tau, k1) && h.tangent(axpy(X, hstep / 2, k1), tau + hstep / 2, k2) &&
              h.tangent(axpy(X, hstep / 2, k2), tau + hstep / 2, k3) &&
              h.tangent(axpy(X, hstep, k3), tau + hstep, k4);
    const double next_tau = (hstep == 1.0 - tau) ? 1.0 : tau + hstep;
    if (ok) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = X[i] + hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      ok = detail::correct(h, trial, next_tau, opt.corrector_iterations, opt.corrector_tol);
    }
    if (ok) {
      X = trial;
      tau = next_tau;
      if (++successes >= opt.growth_after) {
        step = std::min(step * opt.growth, opt.max_step);
        successes = 0;
      }
    } else {
      successes = 0;
      step /= 2.0;
      if (step < opt.min_step) break;
    }
  }
  out.X = std::move(X);
  out.tau = tau;
  out.reached_end = tau >= 1.0;
  return out;
}

}  // namespace region_carver
