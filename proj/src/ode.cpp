#include "decosim/ode.hpp"

#include <algorithm>
#include <cmath>

namespace decosim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights (via the embedded b-hat row including k7).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Eigen::MatrixXcd& err, const Eigen::MatrixXcd& y0,
                  const Eigen::MatrixXcd& y1, double abs_tol, double rel_tol) {
  double sum = 0.0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(*(y0.data() + i)), std::abs(*(y1.data() + i)));
    const double e = std::abs(*(err.data() + i)) / scale;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

OdeResult integrate_rk45(const OdeRhs& rhs, const Eigen::MatrixXcd& y0,
                         const std::vector<double>& sample_times, const OdeOptions& opts,
                         const OdeStepHook& post_step) {
  if (sample_times.empty()) throw DomainError("integrate_rk45: no sample times");
  for (size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) {
      throw DomainError("integrate_rk45: sample times must be strictly increasing");
    }
  }
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw DomainError("integrate_rk45: tolerances must be positive");
  }

  OdeResult result;
  result.states.reserve(sample_times.size());
  result.states.push_back(y0);

  Eigen::MatrixXcd y = y0;
  double t = sample_times.front();
  const double span = sample_times.back() - t;
  if (span == 0.0) return result;

  double h = opts.initial_step > 0.0 ? opts.initial_step : span * 1e-4;
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  for (size_t target_idx = 1; target_idx < sample_times.size(); ++target_idx) {
    const double t_target = sample_times[target_idx];
    while (t < t_target) {
      const double h_step = std::min(h, t_target - t);
      if (!(h_step > std::abs(t) * 1e-15 + 1e-300)) {
        throw NumericalError("integrate_rk45: step size underflow at t = " + std::to_string(t));
      }
      if (result.n_accepted + result.n_rejected > opts.max_steps) {
        throw NumericalError("integrate_rk45: step budget exhausted");
      }

      const Eigen::MatrixXcd k1 = rhs(t, y);
      const Eigen::MatrixXcd k2 = rhs(t + c2 * h_step, y + h_step * (a21 * k1));
      const Eigen::MatrixXcd k3 = rhs(t + c3 * h_step, y + h_step * (a31 * k1 + a32 * k2));
      const Eigen::MatrixXcd k4 =
          rhs(t + c4 * h_step, y + h_step * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::MatrixXcd k5 =
          rhs(t + c5 * h_step, y + h_step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::MatrixXcd k6 = rhs(
          t + h_step, y + h_step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Eigen::MatrixXcd y_new =
          y + h_step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Eigen::MatrixXcd k7 = rhs(t + h_step, y_new);
      const Eigen::MatrixXcd err =
          h_step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double norm = error_norm(err, y, y_new, opts.abs_tol, opts.rel_tol);
      if (norm <= 1.0) {
        t += h_step;
        if (post_step) post_step(t, y_new);
        y = std::move(y_new);
        ++result.n_accepted;
      } else {
        ++result.n_rejected;
      }

      const double factor =
          std::clamp(0.9 * std::pow(std::max(norm, 1e-12), -0.2), 0.2, 5.0);
      h = h_step * factor;
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    }
    result.states.push_back(y);
  }
  return result;
}

}  // namespace decosim
