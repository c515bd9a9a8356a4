#pragma once

// Discretized influence functional for a pair of amplitude histories x(t),
// y(t) coupled linearly to the ohmic bath, the large-cutoff asymptotic form
// of its imaginary part, and the closed-form decoherence-time estimators.
//
// Conventions (also echoed in the CLI metadata): the imaginary-part double
// sum runs over the full square [0,t_f]^2; the complex influence phase
// integrates the kernel over the ordered region s <= t; the action phase
// carries an explicit 1/hbar.

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "decosim/bath.hpp"
#include "decosim/common.hpp"
#include "decosim/oscillator.hpp"
#include "decosim/units.hpp"

namespace decosim {

// Two real amplitude histories on a shared uniform time grid starting at 0.
struct PathPair {
  Eigen::VectorXd times;
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  PathPair(Eigen::VectorXd times_, Eigen::VectorXd x_, Eigen::VectorXd y_);

  static PathPair constant_separation(double delta, double t_final, int n_steps);

  int n_steps() const { return static_cast<int>(times.size()) - 1; }
  double dt() const { return times(1) - times(0); }
  double t_final() const { return times(times.size() - 1); }
};

enum class IntegrationDomain { ordered, full_square };

// Imaginary influence phase at T = 0: trapezoidal double sum of
// [x(t)-y(t)][x(s)-y(s)] against (eta/pi) Omega sin(Omega tau)/tau
// - (eta/2pi) (sin(Omega tau/2)/(tau/2))^2 over the full square.
// Throws DomainError unless bath.temperature == 0.
double w_imag_discrete(const PathPair& paths, const BathSpec& bath);

struct AsymptoticWImag {
  double w_imag;     // (eta Omega / 2) * int (x-y)^2 dt
  double exponent;   // w_imag / hbar
};
AsymptoticWImag w_imag_asymptotic(const PathPair& paths, const BathSpec& bath,
                                  const UnitSystem& units);

// Complex influence phase W = i * iint [x(t)-y(t)][alpha(t-s) x(s)
// - alpha*(t-s) y(s)] ds dt with alpha = alpha_R + i alpha_I.
Complex influence_phase(const PathPair& paths, const BathSpec& bath, const UnitSystem& units,
                        IntegrationDomain domain = IntegrationDomain::ordered);

// Discretized harmonic action int (m xdot^2 / 2 - m omega^2 x^2 / 2) dt,
// midpoint velocities and trapezoidal potential.
double harmonic_action(const Eigen::VectorXd& times, const Eigen::VectorXd& path, double mass,
                       double omega);

// Coarse-grained path weight exp(i[S(x)-S(y)]/hbar) exp(iW) rho0(y(0), x(0)).
// The paths must rejoin at t_f within 1e-9 (the endpoint delta).
Complex decoherence_weight(const PathPair& paths,
                           const std::function<Complex(double, double)>& rho0_position,
                           const OscillatorSystem& system, const BathSpec& bath,
                           const UnitSystem& units);

enum class DecoherenceRegime { zero_temperature, high_temperature };

struct DecoherenceEstimate {
  double t_d = 0.0;
  DecoherenceRegime regime = DecoherenceRegime::zero_temperature;
  // Echoed inputs.
  double delta_x = 0.0;
  double eta = 0.0;
  double omega_cut = 0.0;
  double temperature = 0.0;
  // Thermal regime only: t_d(thermal) / t_d(T=0) = hbar Omega / k_B T.
  std::optional<double> ratio_to_zero_temp;
};

// t_d = hbar / (eta Omega |dx|^2) at T = 0.
DecoherenceEstimate decoherence_time_zero_temp(double delta_x, const BathSpec& bath,
                                               const UnitSystem& units);

// t_d = (hbar / eta k_B T) * hbar / |dx|^2 for k_B T >> hbar Omega.
DecoherenceEstimate decoherence_time_thermal(double delta_x, const BathSpec& bath,
                                             const UnitSystem& units);

// Optical resonator estimate: N photons in a medium with gain g per cm decohere
// in roughly 1 / (c g N) seconds.
struct OpticalSpec {
  double n_photons = 1.0;
  double gain_per_cm = 1.0;
  double light_speed_cm_s = 2.998e10;

  OpticalSpec() = default;
  OpticalSpec(double n_photons_, double gain_per_cm_, double light_speed_cm_s_ = 2.998e10);
};

double optical_decoherence_time_seconds(const OpticalSpec& spec);

}  // namespace decosim
