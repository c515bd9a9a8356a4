#pragma once

// Correlation kernels of an ohmic environment with a sharp frequency cutoff:
//
//   alpha_R(tau) = (eta/pi) int_0^Omega w coth(hbar w / 2 k_B T) cos(w tau) dw
//   alpha_I(tau) = (eta/pi) (Omega/tau) [cos(Omega tau) - sin(Omega tau)/(Omega tau)]
//
// with the T = 0 real part in closed form
//
//   alpha_R(tau; T=0) = (eta/pi) Omega sin(Omega tau)/tau
//                       - (eta/2pi) (sin(Omega tau/2) / (tau/2))^2.
//
// The removable singularities at tau = 0 are handled by series branches.

#include "decosim/common.hpp"
#include "decosim/units.hpp"

namespace decosim {

struct BathSpec {
  double eta = 1.0;          // damping coefficient
  double omega_cut = 10.0;   // high-frequency cutoff Omega
  double temperature = 0.0;

  BathSpec() = default;
  BathSpec(double eta_, double omega_cut_, double temperature_);
};

// Odd in tau; series branch for |Omega tau| < 1e-2 (the direct form loses
// ~7 digits already at 1e-4).
double alpha_imag(double tau, const BathSpec& bath);

// Even in tau; value eta Omega^2 / 2 pi at tau = 0. Series branch for
// |Omega tau| < 1e-4.
double alpha_real_zero_temp(double tau, const BathSpec& bath);

// Integrand of the finite-temperature kernel at a single frequency,
// including the eta/pi prefactor. Finite at omega -> 0: the limit is 0 for
// T = 0 and 2 eta k_B T / (pi hbar) for T > 0.
double alpha_real_integrand(double omega, double tau, const BathSpec& bath,
                            const UnitSystem& units);

// Adaptive quadrature of the finite-temperature kernel; exact closed-form
// branch at T = 0. Tolerance 1e-10 absolute+relative.
double alpha_real_finite_temp(double tau, const BathSpec& bath, const UnitSystem& units);

}  // namespace decosim
