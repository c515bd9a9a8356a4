#pragma once

// Small numerical helpers shared across modules: cancellation-safe kernels,
// trapezoidal weights, tensor products, phase unwrapping.

#include <Eigen/Dense>
#include <cmath>

#include "decosim/common.hpp"

namespace decosim {

// sin(z)/z with a series branch; relative accuracy ~1e-16 everywhere.
inline double sinc(double z) {
  const double z2 = z * z;
  if (std::abs(z) < 1e-4) {
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// cos(z) - sin(z)/z. The direct form loses ~7 digits at |z| ~ 1e-4, so the
// series branch extends to |z| < 1e-2 where the direct form is accurate.
inline double cos_minus_sinc(double z) {
  const double z2 = z * z;
  if (std::abs(z) < 1e-2) {
    return -z2 / 3.0 * (1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0);
  }
  return std::cos(z) - std::sin(z) / z;
}

// Trapezoidal quadrature weights for a uniform grid of n points, spacing h.
inline Eigen::VectorXd trapezoid_weights(int n, double h) {
  if (n < 2) throw DomainError("trapezoid_weights: need at least 2 points");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w(0) = 0.5 * h;
  w(n - 1) = 0.5 * h;
  return w;
}

inline double trapezoid(const Eigen::VectorXd& values, double h) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw DomainError("trapezoid: need at least 2 points");
  return h * (values.sum() - 0.5 * (values(0) + values(n - 1)));
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Cumulative 2*pi unwrap along a sampled phase, starting from index `anchor`.
inline Eigen::VectorXd unwrap_phase(const Eigen::VectorXd& phase, int anchor = 0) {
  const int n = static_cast<int>(phase.size());
  Eigen::VectorXd out(n);
  out(anchor) = phase(anchor);
  for (int i = anchor + 1; i < n; ++i) {
    double d = phase(i) - phase(i - 1);
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    out(i) = out(i - 1) + d;
  }
  for (int i = anchor - 1; i >= 0; --i) {
    double d = phase(i) - phase(i + 1);
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    out(i) = out(i + 1) + d;
  }
  return out;
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace decosim
