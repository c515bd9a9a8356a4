#include "decosim/bath.hpp"

#include <cmath>

#include "decosim/numeric.hpp"
#include "decosim/quadrature.hpp"

namespace decosim {

BathSpec::BathSpec(double eta_, double omega_cut_, double temperature_)
    : eta(eta_), omega_cut(omega_cut_), temperature(temperature_) {
  if (eta < 0.0) throw DomainError("BathSpec: eta must be non-negative");
  if (!(omega_cut > 0.0)) throw DomainError("BathSpec: omega_cut must be positive");
  if (temperature < 0.0) throw DomainError("BathSpec: temperature must be non-negative");
}

double alpha_imag(double tau, const BathSpec& bath) {
  const double z = bath.omega_cut * tau;
  if (std::abs(z) < 1e-2) {
    // (eta/pi)(Omega/tau)[cos z - sin z / z] expanded about z = 0.
    const double z2 = z * z;
    return -(bath.eta / kPi) * bath.omega_cut * bath.omega_cut * (z / 3.0) *
           (1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0);
  }
  return (bath.eta / kPi) * (bath.omega_cut / tau) * (std::cos(z) - std::sin(z) / z);
}

double alpha_real_zero_temp(double tau, const BathSpec& bath) {
  const double omega = bath.omega_cut;
  const double z = omega * tau;
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return (bath.eta / kPi) * omega * omega * (0.5 - z2 / 8.0 + z2 * z2 / 144.0);
  }
  const double half = sinc(0.5 * z);
  return (bath.eta / kPi) * omega * omega * (sinc(z) - 0.5 * half * half);
}

double alpha_real_integrand(double omega, double tau, const BathSpec& bath,
                            const UnitSystem& units) {
  const double prefactor = bath.eta / kPi;
  if (bath.temperature == 0.0) {
    // coth -> 1 for all frequencies; the omega = 0 value is 0.
    return prefactor * omega * std::cos(omega * tau);
  }
  const double kt = units.boltzmann * bath.temperature;
  const double x = units.hbar * omega / (2.0 * kt);
  double weighted;
  if (x < 1e-6) {
    // omega coth(x) = 2kT/hbar + hbar omega^2 / 6kT + O(x^3 omega)
    weighted = 2.0 * kt / units.hbar + units.hbar * omega * omega / (6.0 * kt);
  } else {
    weighted = omega / std::tanh(x);
  }
  return prefactor * weighted * std::cos(omega * tau);
}

double alpha_real_finite_temp(double tau, const BathSpec& bath, const UnitSystem& units) {
  if (bath.temperature == 0.0) return alpha_real_zero_temp(tau, bath);
  const double phase_span = bath.omega_cut * std::abs(tau);
  return integrate_adaptive(
      [&](double omega) { return alpha_real_integrand(omega, tau, bath, units); }, 0.0,
      bath.omega_cut, phase_span);
}

}  // namespace decosim
