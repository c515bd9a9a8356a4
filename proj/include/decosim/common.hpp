#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace decosim {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Invalid inputs or preconditions (wrong regime, mismatched dimensions,
// grids that do not cover the state, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runtime numerical failures (quadrature non-convergence, step-size
// underflow, positivity or truncation guards tripping, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace decosim
