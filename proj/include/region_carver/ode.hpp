#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace region_carver {

/// Embedded Dormand-Prince 5(4) stepper for autonomous systems y' = f(y),
/// with first-same-as-last reuse and standard error-based step control.
class DormandPrince45 {
 public:
  /// Returns false when f cannot be evaluated at y; the step is then rejected.
  using Rhs = std::function<bool(std::span<const double> y, std::span<double> dy)>;
  /// Extra acceptance test on a candidate step that already passed error control.
  using Accept = std::function<bool(std::span<const double> y)>;

  struct Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 1e-3;
    double min_step = 1e-14;
    double max_step = std::numeric_limits<double>::infinity();
  };

  DormandPrince45(Rhs f, std::vector<double> y0, Options opt) : f_(std::move(f)), opt_(opt), y_(std::move(y0)) {
    const std::size_t n = y_.size();
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->assign(n, 0.0);
    tmp_.assign(n, 0.0);
    cand_.assign(n, 0.0);
    h_ = opt_.initial_step;
    ready_ = f_(y_, k1_);
  }

  bool ready() const noexcept { return ready_; }
  const std::vector<double>& state() const noexcept { return y_; }
  /// Derivative at the current state.
  const std::vector<double>& slope() const noexcept { return k1_; }
  double time() const noexcept { return t_; }
  double step_size() const noexcept { return h_; }
  std::size_t rejected() const noexcept { return rejected_; }

  /// Advances one accepted step, shrinking h as needed. Returns false if the
  /// step size falls below the minimum.
  bool step(const Accept& accept = {}) {
    const std::size_t n = y_.size();
    bool just_rejected = false;
    for (;;) {
      if (h_ < opt_.min_step) return false;
      const double h = h_;
      bool ok = stage(k2_, h, {1.0 / 5}) && stage(k3_, h, {3.0 / 40, 9.0 / 40}) &&
                stage(k4_, h, {44.0 / 45, -56.0 / 15, 32.0 / 9}) &&
                stage(k5_, h, {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729}) &&
                stage(k6_, h, {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656});
      double err = std::numeric_limits<double>::infinity();
      if (ok) {
        for (std::size_t i = 0; i < n; ++i)
          cand_[i] = y_[i] + h * (35.0 / 384 * k1_[i] + 500.0 / 1113 * k3_[i] + 125.0 / 192 * k4_[i] -
                                  2187.0 / 6784 * k5_[i] + 11.0 / 84 * k6_[i]);
        ok = f_(cand_, k7_);
      }
      if (ok) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double e = h * (71.0 / 57600 * k1_[i] - 71.0 / 16695 * k3_[i] + 71.0 / 1920 * k4_[i] -
                                17253.0 / 339200 * k5_[i] + 22.0 / 525 * k6_[i] - 1.0 / 40 * k7_[i]);
          const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(cand_[i]));
          sum += (e / sc) * (e / sc);
        }
        err = std::sqrt(sum / static_cast<double>(std::max<std::size_t>(n, 1)));
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
      }
      if (err <= 1.0 && (!accept || accept(cand_))) {
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, just_rejected ? 1.0 : 5.0);
        y_.swap(cand_);
        k1_.swap(k7_);
        t_ += h;
        h_ = std::min(h * fac, opt_.max_step);
        return true;
      }
      ++rejected_;
      just_rejected = true;
      h_ = std::isfinite(err) && err > 1.0 ? h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : h * 0.25;
    }
  }

 private:
  bool stage(std::vector<double>& out, double h, std::initializer_list<double> a) {
    const std::vector<double>* ks[] = {&k1_, &k2_, &k3_, &k4_, &k5_};
    for (std::size_t i = 0; i < y_.size(); ++i) {
      double s = 0.0;
      std::size_t j = 0;
      for (double c : a) s += c * (*ks[j++])[i];
      tmp_[i] = y_[i] + h * s;
    }
    return f_(tmp_, out);
  }

  Rhs f_;
  Options opt_;
  std::vector<double> y_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, cand_;
  double h_ = 1e-3;
  double t_ = 0.0;
  std::size_t rejected_ = 0;
  bool ready_ = false;
};

}  // namespace region_carver
