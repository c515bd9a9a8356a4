#pragma once

#include <functional>

#include "decosim/common.hpp"

namespace decosim {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 15;    // bisection levels inside each panel
  int min_panels = 4;
};

// Adaptive Gauss-Kronrod integration of f over [a, b]. `phase_span` is the
// total oscillation phase accumulated across the interval (e.g. Omega*|tau|
// for cos(omega*tau) against omega in [0, Omega]); the interval is pre-split
// so each panel covers at most ~pi/4 of phase before the adaptive rule runs.
// Throws NumericalError when the combined error estimate exceeds
// max(abs_tol, rel_tol*|result|) after max_depth subdivisions.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double phase_span, const QuadratureOptions& opts = {});

}  // namespace decosim
