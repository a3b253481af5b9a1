#pragma once

// Embedded Dormand-Prince 5(4) integrator for Eigen dense states
// (real or complex vectors and matrices). Steps are clipped so that every
// requested output time is hit exactly; no interpolation is involved.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include <Eigen/Dense>

#include "ioncool/quantum.hpp"

namespace ioncool {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: pick from the output spacing
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, const IntegratorOptions& opt) {
  const auto scale = (opt.atol + opt.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from output_times.front() through every
/// entry of output_times (strictly increasing). `observe(i, t, y)` is
/// called at each output time, including the initial one. `post_step(y)`
/// may project the state after every accepted step.
template <class State, class Rhs, class Observer, class PostStep>
IntegratorStats integrate_dopri5(Rhs&& rhs, State y, std::span<const double> output_times,
                                 const IntegratorOptions& opt, Observer&& observe,
                                 PostStep&& post_step) {
  // Butcher tableau
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegratorStats stats;
  if (output_times.empty()) return stats;
  double t = output_times.front();
  observe(std::size_t{0}, t, y);
  if (output_times.size() == 1) return stats;

  double h = opt.initial_step > 0.0 ? opt.initial_step
                                    : (output_times[1] - output_times[0]) * 1e-2;
  h = std::min(h, opt.max_step);
  State k1 = rhs(t, y);
  for (std::size_t i = 1; i < output_times.size(); ++i) {
    const double target = output_times[i];
    if (!(target > t)) throw Error("integrate_dopri5: output times must be strictly increasing");
    while (t < target) {
      if (stats.accepted + stats.rejected > opt.max_steps)
        throw NumericalError("integrate_dopri5: step budget exhausted");
      const bool last = t + h >= target;
      const double step = last ? target - t : h;
      const State k2 = rhs(t + c2 * step, (y + step * a21 * k1).eval());
      const State k3 = rhs(t + c3 * step, (y + step * (a31 * k1 + a32 * k2)).eval());
      const State k4 = rhs(t + c4 * step, (y + step * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
      const State k5 =
          rhs(t + c5 * step, (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
      const State k6 = rhs(
          t + step, (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
      State y_new = (y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)).eval();
      const State k7 = rhs(t + step, y_new);
      const State err = (step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();
      const double err_norm = detail::scaled_error(err, y, y_new, opt);
      if (!std::isfinite(err_norm)) throw NumericalError("integrate_dopri5: non-finite state");

      if (err_norm <= 1.0) {
        t = last ? target : t + step;
        y = std::move(y_new);
        post_step(y);
        k1 = rhs(t, y);
        ++stats.accepted;
      } else {
        ++stats.rejected;
      }
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      // A clipped final step says nothing about how large the next one may be.
      if (!(last && err_norm <= 1.0)) h = std::min(step * factor, opt.max_step);
      const double floor = 1e-14 * std::max(1.0, std::abs(t));
      if (h < floor) {
        std::ostringstream msg;
        msg << "integrate_dopri5: step size underflow at t=" << t;
        throw NumericalError(msg.str());
      }
    }
    observe(i, t, y);
  }
  return stats;
}

template <class State, class Rhs, class Observer>
IntegratorStats integrate_dopri5(Rhs&& rhs, State y, std::span<const double> output_times,
                                 const IntegratorOptions& opt, Observer&& observe) {
  return integrate_dopri5(std::forward<Rhs>(rhs), std::move(y), output_times, opt,
                          std::forward<Observer>(observe), [](State&) {});
}

/// Evenly spaced samples from t0 to t1 inclusive.
std::vector<double> linspace(double t0, double t1, int samples);

}  // namespace ioncool
