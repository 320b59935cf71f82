#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "region_carver/critical_points.hpp"
#include "region_carver/errors.hpp"
#include "region_carver/linalg.hpp"
#include "region_carver/morse.hpp"
#include "region_carver/ode.hpp"

namespace region_carver {

struct FlowOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double grad_tol = 1e-7;
  double match_tol = 1e-5;
  double ascent_slack = 1e-9;
  std::size_t max_steps = 1000000;
  double initial_step = 1e-3;
  /// Called at every accepted step with the point and its log g.
  std::function<void(std::span<const double>, double)> observer;
};

struct FlowResult {
  std::optional<std::size_t> limit_index;  // into the critical point list
  std::size_t trajectory_len = 0;
  double final_grad_norm = 0.0;
  RealVector endpoint;
  double start_log_g = 0.0;
  double end_log_g = 0.0;

  bool matched() const noexcept { return limit_index.has_value(); }
};

namespace detail {

// Newton on grad log g = 0, stopping early if it leaves the region of x or
// fails to converge.
inline std::optional<RealVector> newton_on_gradient(const MorseFunction& m, RealVector x, const SignVector& sigma) {
  for (int it = 0; it < 20; ++it) {
    LogGradient lg;
    try {
      lg = m.evaluate(x, true);
    } catch (const OnHypersurfaceError&) {
      return std::nullopt;
    }
    RealVector step = lg.grad;
    for (auto& v : step) v = -v;
    if (!lu_solve(*lg.hessian, std::span<double>(step))) return std::nullopt;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step[i];
    if (norm2(step) < 1e-14 * (1.0 + norm2(x))) break;
  }
  try {
    if (m.signs(x) != sigma) return std::nullopt;
    if (norm2(m.evaluate(x).grad) >= 1e-8 * (1.0 + norm2(x))) return std::nullopt;
  } catch (const OnHypersurfaceError&) {
    return std::nullopt;
  }
  return x;
}

inline std::optional<std::size_t> nearest_critical(const std::vector<CriticalPoint>& crit, std::span<const double> x,
                                                   double tol) {
  std::optional<std::size_t> best;
  double best_d = HUGE_VAL;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double d = distance(std::span<const double>(crit[i].x), x);
    if (d < tol * (1.0 + norm2(std::span<const double>(crit[i].x))) && d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace detail

/// Integrates the ascent x' = grad log g from x0 and matches the limit
/// against the known critical points.
inline FlowResult flow_to_critical_point(const MorseFunction& m, std::span<const double> x0,
                                         const std::vector<CriticalPoint>& crit, const FlowOptions& opt = {}) {
  if (crit.empty()) throw std::invalid_argument("no critical points to flow to");
  const SignVector sigma = m.signs(x0);
  FlowResult res;
  res.start_log_g = m.log_value(x0);

  double last_value = res.start_log_g;
  auto rhs = [&](std::span<const double> y, std::span<double> dy) {
    try {
      const LogGradient lg = m.evaluate(y);
      std::copy(lg.grad.begin(), lg.grad.end(), dy.begin());
      last_value = lg.value;
      for (double v : lg.grad)
        if (!std::isfinite(v)) return false;
      return true;
    } catch (const OnHypersurfaceError&) {
      return false;
    }
  };
  double current_value = res.start_log_g;
  auto accept = [&](std::span<const double> y) {
    if (last_value < current_value - opt.ascent_slack) return false;
    try {
      return m.signs(y) == sigma;
    } catch (const OnHypersurfaceError&) {
      return false;
    }
  };

  DormandPrince45::Options dopt;
  dopt.rtol = opt.rtol;
  dopt.atol = opt.atol;
  dopt.initial_step = opt.initial_step;
  DormandPrince45 ode(rhs, RealVector(x0.begin(), x0.end()), dopt);
  if (!ode.ready()) throw FlowBreakdownError("gradient undefined at the flow start");

  auto x0_near = [&](std::size_t idx) {
    return distance(std::span<const double>(crit[idx].x), x0) <
           opt.match_tol * (1.0 + norm2(std::span<const double>(crit[idx].x)));
  };
  auto try_finish = [&](const RealVector& y, bool require_concave) -> bool {
    if (require_concave) {
      const LogGradient lg = m.evaluate(y, true);
      if (jacobi_eigen(*lg.hessian).values.back() >= 0.0) return false;
    }
    const auto polished = detail::newton_on_gradient(m, y, sigma);
    if (!polished) return false;
    const auto idx = detail::nearest_critical(crit, *polished, opt.match_tol);
    if (!idx) return false;
    if (crit[*idx].index != 0) return false;
    if (!(crit[*idx].log_g > res.start_log_g) && !x0_near(*idx)) return false;
    if (crit[*idx].log_g < current_value - opt.ascent_slack) return false;
    res.limit_index = idx;
    res.endpoint = *polished;
    res.end_log_g = crit[*idx].log_g;
    return true;
  };

  std::size_t saddle_visits = 0;
  double next_check = HUGE_VAL;
  while (res.trajectory_len < opt.max_steps) {
    const double g = norm2(std::span<const double>(ode.slope()));
    res.final_grad_norm = g;
    if (g < opt.grad_tol) {
      if (try_finish(ode.state(), false)) return res;
      // landed near a non-maximum; accept it after repeated visits
      const auto polished = detail::newton_on_gradient(m, ode.state(), sigma);
      if (polished) {
        if (const auto idx = detail::nearest_critical(crit, *polished, opt.match_tol);
            idx && ++saddle_visits > 3 && (crit[*idx].log_g > res.start_log_g || x0_near(*idx))) {
          res.limit_index = idx;
          res.endpoint = *polished;
          res.end_log_g = crit[*idx].log_g;
          return res;
        }
      }
    } else if (g < next_check) {
      // near a maximum Newton converges long before the ODE does
      next_check = g / 10.0;
      if (g < 1e-2 && try_finish(ode.state(), true)) return res;
    }
    if (!ode.step(accept)) throw FlowBreakdownError("gradient flow stalled near a hypersurface");
    current_value = last_value;
    ++res.trajectory_len;
    if (opt.observer) opt.observer(ode.state(), last_value);
  }
  res.endpoint = ode.state();
  res.end_log_g = current_value;
  return res;
}

inline FlowResult flow_to_critical_point(const MorseFunction& m, const RealVector& x0,
                                         const std::vector<CriticalPoint>& crit, const FlowOptions& opt = {}) {
  return flow_to_critical_point(m, std::span<const double>(x0), crit, opt);
}

}  // namespace region_carver
