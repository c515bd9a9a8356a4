#include "decosim/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

namespace decosim {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double phase_span, const QuadratureOptions& opts) {
  if (!(b >= a)) throw DomainError("integrate_adaptive: require b >= a");
  if (a == b) return 0.0;

  const int oscillation_panels =
      static_cast<int>(std::ceil(std::abs(phase_span) / (kPi / 4.0)));
  const int panels = std::clamp(std::max(opts.min_panels, oscillation_panels), 1, 1 << 16);

  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double width = (b - a) / panels;
  double total = 0.0;
  double err_total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p == panels - 1) ? b : lo + width;
    double err = 0.0;
    total += Rule::integrate(f, lo, hi, opts.max_depth, 1e-13, &err);
    err_total += err;
  }

  const double bound = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  if (!(err_total <= bound) || !std::isfinite(total)) {
    throw NumericalError("integrate_adaptive: no convergence after max subdivisions (error " +
                         std::to_string(err_total) + ", bound " + std::to_string(bound) + ")");
  }
  return total;
}

}  // namespace decosim
