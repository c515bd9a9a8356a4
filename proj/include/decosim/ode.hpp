#pragma once

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) on dense complex
// matrices. The caller supplies the right-hand side and an optional hook run
// after every accepted step (used to re-Hermitize density matrices).

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "decosim/common.hpp"

namespace decosim {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.0;      // 0 = no cap
  double initial_step = 0.0;  // 0 = choose automatically
  long max_steps = 50'000'000;
};

using OdeRhs = std::function<Eigen::MatrixXcd(double, const Eigen::MatrixXcd&)>;
using OdeStepHook = std::function<void(double, Eigen::MatrixXcd&)>;

struct OdeResult {
  std::vector<Eigen::MatrixXcd> states;  // one per requested sample time
  long n_accepted = 0;
  long n_rejected = 0;
};

// Integrates from sample_times.front() taking y0 as the state there; the
// first returned sample is y0 itself. Sample times must be strictly
// increasing. Throws NumericalError on step-size underflow.
OdeResult integrate_rk45(const OdeRhs& rhs, const Eigen::MatrixXcd& y0,
                         const std::vector<double>& sample_times, const OdeOptions& opts,
                         const OdeStepHook& post_step = {});

}  // namespace decosim
