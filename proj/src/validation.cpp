#include "decosim/validation.hpp"

#include <cmath>
#include <limits>

#include "decosim/numeric.hpp"

namespace decosim {

namespace {

constexpr double kDensityFloor = 1e-12;
constexpr long kJointDimensionCap = 4096;

// 4th-order central first and second derivatives at index i (needs i +/- 2).
double d1(const Eigen::VectorXd& f, int i, double h) {
  return (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) / (12.0 * h);
}
double d2(const Eigen::VectorXd& f, int i, double h) {
  return (-f(i + 2) + 16.0 * f(i + 1) - 30.0 * f(i) + 16.0 * f(i - 1) - f(i - 2)) /
         (12.0 * h * h);
}

}  // namespace

ResidualReport hamilton_jacobi_residual(const GridWavefunction& psi_a,
                                        const GridWavefunction& psi_b, double dt,
                                        const std::function<double(double)>& potential,
                                        double mass, const UnitSystem& units,
                                        HJConvention convention) {
  if (psi_a.grid.n_points != psi_b.grid.n_points ||
      psi_a.grid.x_min != psi_b.grid.x_min || psi_a.grid.x_max != psi_b.grid.x_max) {
    throw DomainError("hamilton_jacobi_residual: time slices on different grids");
  }
  if (!(dt > 0.0)) throw DomainError("hamilton_jacobi_residual: dt must be positive");
  if (!(mass > 0.0)) throw DomainError("hamilton_jacobi_residual: mass must be positive");

  const int n = psi_a.grid.n_points;
  const double h = psi_a.grid.spacing();
  const Eigen::VectorXd x = psi_a.grid.points();
  const Eigen::VectorXd p = psi_a.probability_density();
  const Eigen::VectorXd p_b = psi_b.probability_density();

  // Anchor the unwrap at the highest-density point so the reference phase is
  // well defined, then align the two slices there modulo 2 pi.
  int anchor = 0;
  p.maxCoeff(&anchor);
  Eigen::VectorXd phi_a = unwrap_phase(psi_a.phase_raw(), anchor);
  Eigen::VectorXd phi_b = unwrap_phase(psi_b.phase_raw(), anchor);
  const double offset =
      2.0 * kPi * std::round((phi_b(anchor) - phi_a(anchor)) / (2.0 * kPi));
  phi_b.array() -= offset;

  Eigen::VectorXd ln_p(n);
  Eigen::VectorXd sqrt_p(n);
  for (int i = 0; i < n; ++i) {
    ln_p(i) = p(i) > 0.0 ? std::log(p(i)) : -std::numeric_limits<double>::infinity();
    sqrt_p(i) = std::sqrt(std::max(p(i), 0.0));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ResidualReport report;
  report.x = x;
  report.lhs = Eigen::VectorXd::Constant(n, nan);
  report.rhs = Eigen::VectorXd::Constant(n, nan);
  report.residual = Eigen::VectorXd::Constant(n, nan);

  const double half_hbar_sq_over_m = units.hbar * units.hbar / (2.0 * mass);
  for (int i = 2; i < n - 2; ++i) {
    bool valid = true;
    for (int j = i - 2; j <= i + 2; ++j) {
      if (!(p(j) > kDensityFloor) || !(p_b(j) > kDensityFloor)) valid = false;
    }
    if (!valid) continue;

    const double dphi_dt = (phi_b(i) - phi_a(i)) / dt;
    const double grad_phi = d1(phi_a, i, h);
    const double lhs =
        units.hbar * dphi_dt + half_hbar_sq_over_m * grad_phi * grad_phi + potential(x(i));

    double rhs;
    if (convention == HJConvention::as_printed) {
      const double grad_ln_p = d1(ln_p, i, h);
      rhs = half_hbar_sq_over_m * (0.5 * grad_ln_p * grad_ln_p + d2(ln_p, i, h));
    } else {
      rhs = half_hbar_sq_over_m * d2(sqrt_p, i, h) / sqrt_p(i);
    }

    report.lhs(i) = lhs;
    report.rhs(i) = rhs;
    report.residual(i) = lhs - rhs;
    report.interior_max_abs = std::max(report.interior_max_abs, std::abs(lhs - rhs));
    ++report.n_evaluated;
  }

  if (report.n_evaluated < 8) {
    throw DomainError("hamilton_jacobi_residual: density below threshold almost everywhere "
                      "(nodal region)");
  }
  return report;
}

double delta_rho_quadrature(const Eigen::MatrixXcd& rho0_grid, const GridSpec& grid,
                            const OscillatorSystem& system, int n, const BathSpec& bath,
                            double t, const UnitSystem& units) {
  if (rho0_grid.rows() != grid.n_points || rho0_grid.cols() != grid.n_points) {
    throw DomainError("delta_rho_quadrature: rho0 grid does not match the grid spec");
  }
  if (t < 0.0) throw DomainError("delta_rho_quadrature: t must be non-negative");

  const Eigen::VectorXd x = grid.points();
  const double h = grid.spacing();
  const Eigen::VectorXd w = trapezoid_weights(grid.n_points, h);

  // Grid coverage: the diagonal must carry unit mass and psi_n must fit.
  const double diagonal_mass = w.dot(rho0_grid.diagonal().real());
  if (std::abs(diagonal_mass - 1.0) > 1e-6) {
    throw DomainError("delta_rho_quadrature: grid does not contain rho0 (diagonal mass " +
                      std::to_string(diagonal_mass) + ")");
  }
  const Eigen::VectorXd psi = hermite_function_values(system, n, x, units);
  if (std::abs(1.0 - w.dot(psi.cwiseAbs2())) > 1e-8) {
    throw DomainError("delta_rho_quadrature: grid does not contain psi_n");
  }

  // Direct double sum with the printed (x - y)^2 weight; the diagonal
  // contributes exactly zero.
  const Eigen::VectorXd f = w.cwiseProduct(psi);
  Complex integral = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    Complex column = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
      const double gap = x(i) - x(j);
      column += f(i) * gap * gap * rho0_grid(i, j);
    }
    integral += column * f(j);
  }
  const double rate = bath.eta * bath.omega_cut / (kPi * units.hbar);
  return -rate * t * integral.real();
}

BathModeSet::BathModeSet(std::vector<BathMode> modes_) : modes(std::move(modes_)) {
  if (modes.empty()) throw DomainError("BathModeSet: need at least one mode");
  for (const BathMode& m : modes) {
    if (!(m.frequency > 0.0)) throw DomainError("BathModeSet: frequencies must be positive");
    if (m.dim < 2) throw DomainError("BathModeSet: mode dimensions must be at least 2");
  }
  if (env_dim() > kJointDimensionCap) {
    throw DomainError("BathModeSet: environment dimension exceeds 4096");
  }
}

long BathModeSet::env_dim() const {
  long d = 1;
  for (const BathMode& m : modes) {
    d *= m.dim;
    if (d > kJointDimensionCap) return d;
  }
  return d;
}

BathModeSet BathModeSet::ohmic(int n_modes, int local_dim, double eta, double omega_cut,
                               double scale) {
  if (n_modes < 1) throw DomainError("BathModeSet::ohmic: need at least one mode");
  const double dw = omega_cut / n_modes;
  std::vector<BathMode> modes;
  modes.reserve(n_modes);
  for (int k = 1; k <= n_modes; ++k) {
    const double omega_k = k * dw;
    modes.push_back({omega_k, scale * std::sqrt(2.0 * eta * omega_k * dw / kPi), local_dim});
  }
  return BathModeSet(std::move(modes));
}

namespace {

Eigen::MatrixXcd mode_number_hamiltonian(const BathMode& m, const UnitSystem& units) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m.dim, m.dim);
  for (int k = 0; k < m.dim; ++k) h(k, k) = units.hbar * m.frequency * (k + 0.5);
  return h;
}

Eigen::MatrixXcd mode_position(const BathMode& m, const UnitSystem& units) {
  const double scale = std::sqrt(units.hbar / (2.0 * m.frequency));
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(m.dim, m.dim);
  for (int k = 0; k + 1 < m.dim; ++k) {
    const double v = scale * std::sqrt(static_cast<double>(k + 1));
    q(k, k + 1) = v;
    q(k + 1, k) = v;
  }
  return q;
}

// op acting on mode `which` inside the full environment product space.
Eigen::MatrixXcd embed_in_env(const BathModeSet& modes, size_t which,
                              const Eigen::MatrixXcd& op) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (size_t k = 0; k < modes.modes.size(); ++k) {
    if (k == which) {
      out = kron(out, op);
    } else {
      const int d = modes.modes[k].dim;
      out = kron(out, Eigen::MatrixXcd::Identity(d, d));
    }
  }
  return out;
}

}  // namespace

JointTrajectory exact_system_bath(const Eigen::MatrixXcd& h_system, const BathModeSet& modes,
                                  const Eigen::MatrixXcd& coupling_op,
                                  const Eigen::VectorXcd& psi0_joint,
                                  const std::vector<double>& t_samples, const UnitSystem& units) {
  const int sys_dim = static_cast<int>(h_system.rows());
  if (h_system.cols() != sys_dim || sys_dim < 2) {
    throw DomainError("exact_system_bath: system Hamiltonian must be square, dim >= 2");
  }
  if (!is_hermitian(h_system, 1e-10 * std::max(1.0, h_system.cwiseAbs().maxCoeff()))) {
    throw DomainError("exact_system_bath: system Hamiltonian not Hermitian");
  }
  if (coupling_op.rows() != sys_dim || coupling_op.cols() != sys_dim ||
      !is_hermitian(coupling_op, 1e-10 * std::max(1.0, coupling_op.cwiseAbs().maxCoeff()))) {
    throw DomainError("exact_system_bath: coupling operator invalid");
  }
  const long env_dim = modes.env_dim();
  const long joint_dim = sys_dim * env_dim;
  if (joint_dim > kJointDimensionCap) {
    throw DomainError("exact_system_bath: joint dimension exceeds 4096");
  }
  if (psi0_joint.size() != joint_dim) {
    throw DomainError("exact_system_bath: initial state has wrong dimension");
  }
  if (std::abs(psi0_joint.norm() - 1.0) > 1e-8) {
    throw DomainError("exact_system_bath: initial state not normalized");
  }

  const Eigen::MatrixXcd id_sys = Eigen::MatrixXcd::Identity(sys_dim, sys_dim);
  Eigen::MatrixXcd h_env = Eigen::MatrixXcd::Zero(env_dim, env_dim);
  for (size_t k = 0; k < modes.modes.size(); ++k) {
    h_env += embed_in_env(modes, k, mode_number_hamiltonian(modes.modes[k], units));
  }
  Eigen::MatrixXcd h_joint =
      kron(h_system, Eigen::MatrixXcd::Identity(env_dim, env_dim)) + kron(id_sys, h_env);
  for (size_t k = 0; k < modes.modes.size(); ++k) {
    const BathMode& m = modes.modes[k];
    if (m.coupling == 0.0) continue;
    h_joint += m.coupling * kron(coupling_op, embed_in_env(modes, k, mode_position(m, units)));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_joint);
  if (es.info() != Eigen::Success) {
    throw NumericalError("exact_system_bath: eigendecomposition failed");
  }
  const Eigen::VectorXd evals = es.eigenvalues();
  const Eigen::MatrixXcd& evecs = es.eigenvectors();
  const Eigen::VectorXcd coeffs = evecs.adjoint() * psi0_joint;

  JointTrajectory traj;
  traj.times = t_samples;
  traj.reduced.reserve(t_samples.size());
  traj.purity.resize(t_samples.size());
  traj.joint_norm.resize(t_samples.size());
  for (size_t s = 0; s < t_samples.size(); ++s) {
    const double t = t_samples[s];
    Eigen::VectorXcd rotated(coeffs.size());
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
      rotated(j) = coeffs(j) * std::exp(Complex(0.0, -evals(j) * t / units.hbar));
    }
    const Eigen::VectorXcd psi_t = evecs * rotated;
    Eigen::MatrixXcd rho = partial_trace_env(psi_t, sys_dim, env_dim);
    traj.joint_norm(s) = psi_t.norm();
    traj.purity(s) = (rho * rho).trace().real();
    traj.reduced.push_back(std::move(rho));
  }
  return traj;
}

Eigen::VectorXcd joint_with_bath_ground(const StateVector& system_state,
                                        const BathModeSet& modes) {
  const long env_dim = modes.env_dim();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(system_state.dim() * env_dim);
  for (int i = 0; i < system_state.dim(); ++i) {
    psi(i * env_dim) = system_state.amplitudes()(i);  // all modes in level 0
  }
  return psi;
}

Eigen::MatrixXcd partial_trace_env(const Eigen::VectorXcd& psi_joint, int sys_dim, long env_dim) {
  if (psi_joint.size() != sys_dim * env_dim) {
    throw DomainError("partial_trace_env: dimension mismatch");
  }
  // psi[(i, e)] = M(i, e) with the environment index fastest.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi_joint.data(), sys_dim, env_dim);
  return m * m.adjoint();
}

Eigen::MatrixXcd partial_trace_env(const Eigen::MatrixXcd& rho_joint, int sys_dim, long env_dim) {
  if (rho_joint.rows() != sys_dim * env_dim || rho_joint.cols() != sys_dim * env_dim) {
    throw DomainError("partial_trace_env: dimension mismatch");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(sys_dim, sys_dim);
  for (int i = 0; i < sys_dim; ++i) {
    for (int j = 0; j < sys_dim; ++j) {
      Complex sum = 0.0;
      for (long e = 0; e < env_dim; ++e) sum += rho_joint(i * env_dim + e, j * env_dim + e);
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace decosim
