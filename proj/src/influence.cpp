#include "decosim/influence.hpp"

#include <cmath>

#include "decosim/numeric.hpp"

namespace decosim {

PathPair::PathPair(Eigen::VectorXd times_, Eigen::VectorXd x_, Eigen::VectorXd y_)
    : times(std::move(times_)), x(std::move(x_)), y(std::move(y_)) {
  const auto n = times.size();
  if (n < 2 || x.size() != n || y.size() != n) {
    throw DomainError("PathPair: need >= 2 nodes with matching array lengths");
  }
  if (std::abs(times(0)) > 1e-12 * std::max(1.0, std::abs(times(n - 1)))) {
    throw DomainError("PathPair: time grid must start at 0");
  }
  const double h = times(1) - times(0);
  if (!(h > 0.0)) throw DomainError("PathPair: time grid must be increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double step = times(i) - times(i - 1);
    if (std::abs(step - h) > 1e-12 * h) {
      throw DomainError("PathPair: time grid not uniform within 1e-12 relative");
    }
  }
}

PathPair PathPair::constant_separation(double delta, double t_final, int n_steps) {
  if (n_steps < 1 || !(t_final > 0.0)) {
    throw DomainError("PathPair::constant_separation: invalid grid");
  }
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_steps + 1, 0.0, t_final);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n_steps + 1, delta);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_steps + 1);
  return PathPair(std::move(t), std::move(x), std::move(y));
}

namespace {

// Quadratic form sum_ij v_i v_j K(|i-j|) accumulated diagonal by diagonal;
// the kernel table holds K(k h) for k = 0..n.
double toeplitz_quadratic_form(const Eigen::VectorXd& v, const Eigen::VectorXd& kernel) {
  const Eigen::Index n = v.size();
  double total = kernel(0) * v.squaredNorm();
  for (Eigen::Index k = 1; k < n; ++k) {
    double diag = 0.0;
    for (Eigen::Index i = 0; i + k < n; ++i) diag += v(i) * v(i + k);
    total += 2.0 * kernel(k) * diag;
  }
  return total;
}

}  // namespace

double w_imag_discrete(const PathPair& paths, const BathSpec& bath) {
  if (bath.temperature != 0.0) {
    throw DomainError("w_imag_discrete: zero-temperature formula, bath.temperature must be 0");
  }
  const Eigen::Index n = paths.times.size();
  const double h = paths.dt();
  const double omega = bath.omega_cut;
  const double omega2 = omega * omega;

  // The two kernels evaluated on the difference grid tau = k h.
  Eigen::VectorXd k_resonant(n);   // Omega sin(Omega tau)/tau
  Eigen::VectorXd k_halfangle(n);  // (sin(Omega tau/2)/(tau/2))^2
  for (Eigen::Index k = 0; k < n; ++k) {
    const double z = omega * k * h;
    const double half = sinc(0.5 * z);
    k_resonant(k) = omega2 * sinc(z);
    k_halfangle(k) = omega2 * half * half;
  }

  const Eigen::VectorXd w = trapezoid_weights(static_cast<int>(n), h);
  const Eigen::VectorXd v = w.cwiseProduct(paths.x - paths.y);
  const double first = toeplitz_quadratic_form(v, k_resonant);
  const double second = toeplitz_quadratic_form(v, k_halfangle);
  return (bath.eta / kPi) * first - (bath.eta / (2.0 * kPi)) * second;
}

AsymptoticWImag w_imag_asymptotic(const PathPair& paths, const BathSpec& bath,
                                  const UnitSystem& units) {
  if (bath.temperature != 0.0) {
    throw DomainError("w_imag_asymptotic: zero-temperature formula, bath.temperature must be 0");
  }
  const Eigen::VectorXd sep_sq = (paths.x - paths.y).cwiseAbs2();
  const double integral = trapezoid(sep_sq, paths.dt());
  const double w_imag = 0.5 * bath.eta * bath.omega_cut * integral;
  return {w_imag, w_imag / units.hbar};
}

Complex influence_phase(const PathPair& paths, const BathSpec& bath, const UnitSystem& units,
                        IntegrationDomain domain) {
  const Eigen::Index n = paths.times.size();
  const double h = paths.dt();

  // Kernel table on the difference grid; alpha(-tau) = conj(alpha(tau)).
  Eigen::VectorXcd alpha(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double tau = k * h;
    alpha(k) = Complex(alpha_real_finite_temp(tau, bath, units), alpha_imag(tau, bath));
  }

  const Eigen::VectorXd w = trapezoid_weights(static_cast<int>(n), h);
  const Eigen::VectorXd sep = paths.x - paths.y;

  Complex sum = 0.0;
  if (domain == IntegrationDomain::ordered) {
    for (Eigen::Index i = 1; i < n; ++i) {
      Complex inner = 0.0;
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double wj = (j == 0 || j == i) ? 0.5 * h : h;
        const Complex a = alpha(i - j);
        inner += wj * (a * paths.x(j) - std::conj(a) * paths.y(j));
      }
      sum += w(i) * sep(i) * inner;
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex inner = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex a = (j <= i) ? alpha(i - j) : std::conj(alpha(j - i));
        inner += w(j) * (a * paths.x(j) - std::conj(a) * paths.y(j));
      }
      sum += w(i) * sep(i) * inner;
    }
  }
  return Complex(0.0, 1.0) * sum;
}

double harmonic_action(const Eigen::VectorXd& times, const Eigen::VectorXd& path, double mass,
                       double omega) {
  const Eigen::Index n = times.size();
  if (n < 2 || path.size() != n) throw DomainError("harmonic_action: invalid arrays");
  const double h = times(1) - times(0);
  double kinetic = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double v = (path(i + 1) - path(i)) / h;
    kinetic += 0.5 * mass * v * v * h;
  }
  const double potential = trapezoid((0.5 * mass * omega * omega) * path.cwiseAbs2(), h);
  return kinetic - potential;
}

Complex decoherence_weight(const PathPair& paths,
                           const std::function<Complex(double, double)>& rho0_position,
                           const OscillatorSystem& system, const BathSpec& bath,
                           const UnitSystem& units) {
  const Eigen::Index last = paths.times.size() - 1;
  if (std::abs(paths.x(last) - paths.y(last)) > 1e-9) {
    throw DomainError("decoherence_weight: endpoint mismatch, |x(t_f) - y(t_f)| > 1e-9");
  }
  const double action_x = harmonic_action(paths.times, paths.x, system.mass, system.omega);
  const double action_y = harmonic_action(paths.times, paths.y, system.mass, system.omega);
  const Complex phase = Complex(0.0, (action_x - action_y) / units.hbar);
  const Complex w = influence_phase(paths, bath, units, IntegrationDomain::ordered);
  return std::exp(phase) * std::exp(Complex(0.0, 1.0) * w) * rho0_position(paths.y(0), paths.x(0));
}

DecoherenceEstimate decoherence_time_zero_temp(double delta_x, const BathSpec& bath,
                                               const UnitSystem& units) {
  if (!(delta_x > 0.0)) throw DomainError("decoherence_time_zero_temp: delta_x must be positive");
  const double denom = bath.eta * bath.omega_cut * delta_x * delta_x;
  if (!(denom > 0.0)) {
    throw DomainError("decoherence_time_zero_temp: eta * Omega * delta_x^2 must be positive");
  }
  DecoherenceEstimate est;
  est.t_d = units.hbar / denom;
  est.regime = DecoherenceRegime::zero_temperature;
  est.delta_x = delta_x;
  est.eta = bath.eta;
  est.omega_cut = bath.omega_cut;
  est.temperature = bath.temperature;
  return est;
}

DecoherenceEstimate decoherence_time_thermal(double delta_x, const BathSpec& bath,
                                             const UnitSystem& units) {
  if (!(delta_x > 0.0)) throw DomainError("decoherence_time_thermal: delta_x must be positive");
  if (!(bath.temperature > 0.0)) {
    throw DomainError("decoherence_time_thermal: T must be positive (use the T=0 estimator)");
  }
  if (!(bath.eta > 0.0)) throw DomainError("decoherence_time_thermal: eta must be positive");
  const double kt = units.boltzmann * bath.temperature;
  DecoherenceEstimate est;
  est.t_d = (units.hbar / (bath.eta * kt)) * units.hbar / (delta_x * delta_x);
  est.regime = DecoherenceRegime::high_temperature;
  est.delta_x = delta_x;
  est.eta = bath.eta;
  est.omega_cut = bath.omega_cut;
  est.temperature = bath.temperature;
  est.ratio_to_zero_temp = units.hbar * bath.omega_cut / kt;
  return est;
}

OpticalSpec::OpticalSpec(double n_photons_, double gain_per_cm_, double light_speed_cm_s_)
    : n_photons(n_photons_), gain_per_cm(gain_per_cm_), light_speed_cm_s(light_speed_cm_s_) {
  if (!(n_photons >= 1.0)) throw DomainError("OpticalSpec: need at least one photon");
  if (!(gain_per_cm > 0.0)) throw DomainError("OpticalSpec: gain must be positive");
  if (!(light_speed_cm_s > 0.0)) throw DomainError("OpticalSpec: light speed must be positive");
}

double optical_decoherence_time_seconds(const OpticalSpec& spec) {
  return 1.0 / (spec.light_speed_cm_s * spec.gain_per_cm * spec.n_photons);
}

}  // namespace decosim
