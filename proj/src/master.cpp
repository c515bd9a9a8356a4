#include "decosim/master.hpp"

#include <cmath>

#include "decosim/numeric.hpp"
#include "decosim/ode.hpp"

namespace decosim {

EvolutionControl::EvolutionControl(double rel_tol_, double abs_tol_, double max_step_,
                                   double initial_step_)
    : rel_tol(rel_tol_), abs_tol(abs_tol_), max_step(max_step_), initial_step(initial_step_) {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("EvolutionControl: tolerances must be positive");
  }
  if (max_step < 0.0 || initial_step < 0.0) {
    throw DomainError("EvolutionControl: steps must be non-negative");
  }
}

SystemModel coupling_operator_override(const SystemModel& model, const Eigen::MatrixXcd& op) {
  if (op.rows() != model.system.dim || op.cols() != model.system.dim) {
    throw DomainError("coupling_operator_override: operator dimension mismatch");
  }
  if (!is_hermitian(op, 1e-12 * std::max(1.0, op.cwiseAbs().maxCoeff()))) {
    throw DomainError("coupling_operator_override: operator must be Hermitian");
  }
  SystemModel out = model;
  out.coupling = op;
  return out;
}

Eigen::MatrixXcd coupling_matrix(const SystemModel& model, const UnitSystem& units) {
  if (model.coupling) return *model.coupling;
  return position_operator(model.system, units);
}

namespace {

double dephasing_rate(const BathSpec& bath, const UnitSystem& units) {
  return bath.eta * bath.omega_cut / (kPi * units.hbar);
}

Eigen::MatrixXcd double_commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& a_sq,
                                   const Eigen::MatrixXcd& rho) {
  return a_sq * rho - 2.0 * (a * rho * a) + rho * a_sq;
}

}  // namespace

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& rho, const SystemModel& model,
                            const BathSpec& bath, const UnitSystem& units) {
  if (rho.rows() != model.system.dim || rho.cols() != model.system.dim) {
    throw DomainError("dissipator: rho dimension mismatch");
  }
  const Eigen::MatrixXcd a = coupling_matrix(model, units);
  return -dephasing_rate(bath, units) * double_commutator(a, a * a, rho);
}

Trajectory evolve(const DensityMatrix& rho0, const SystemModel& model, const BathSpec& bath,
                  const std::vector<double>& sample_times, const EvolutionControl& ctrl,
                  const UnitSystem& units) {
  if (rho0.dim() != model.system.dim) throw DomainError("evolve: rho0 dimension mismatch");
  if (sample_times.empty()) throw DomainError("evolve: no sample times");
  if (sample_times.front() < 0.0) throw DomainError("evolve: sample times must be >= 0");
  if (bath.eta < 0.0) throw DomainError("evolve: eta must be non-negative");

  const int dim = model.system.dim;
  const double rate = dephasing_rate(bath, units);
  const Eigen::MatrixXcd a = coupling_matrix(model, units);
  const Eigen::MatrixXcd a_sq = a * a;

  // Bohr-frequency table for the unitary term, applied elementwise.
  const Eigen::VectorXd energies = model.system.eigenenergies(units);
  Eigen::MatrixXcd minus_i_omega(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      minus_i_omega(n, m) = Complex(0.0, -(energies(n) - energies(m)) / units.hbar);
    }
  }

  const auto rhs = [&](double, const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
    return minus_i_omega.cwiseProduct(rho) - rate * double_commutator(a, a_sq, rho);
  };

  const auto post_step = [&](double t, Eigen::MatrixXcd& rho) {
    rho = 0.5 * (rho + rho.adjoint().eval());
    // Truncation guard: top two populations must stay negligible, otherwise
    // the dephasing channel silently pumps weight out of the truncated space.
    const double top = rho(dim - 1, dim - 1).real() + rho(dim - 2, dim - 2).real();
    if (top > 1e-6) {
      throw NumericalError("evolve: truncation guard tripped at t = " + std::to_string(t) +
                           " (top two Fock populations " + std::to_string(top) +
                           " > 1e-6); increase dim");
    }
  };

  std::vector<double> times = sample_times;
  const bool prepend_zero = times.front() > 0.0;
  if (prepend_zero) times.insert(times.begin(), 0.0);

  OdeOptions opts;
  opts.rel_tol = ctrl.rel_tol;
  opts.abs_tol = ctrl.abs_tol;
  opts.max_step = ctrl.max_step;
  opts.initial_step = ctrl.initial_step;

  OdeResult ode = integrate_rk45(rhs, rho0.matrix(), times, opts, post_step);

  Trajectory traj;
  traj.n_accepted_steps = ode.n_accepted;
  traj.n_rejected_steps = ode.n_rejected;
  traj.samples.reserve(sample_times.size());
  for (size_t i = prepend_zero ? 1 : 0; i < ode.states.size(); ++i) {
    const double t = times[i];
    try {
      traj.samples.push_back({t, DensityMatrix(std::move(ode.states[i]), 1e-6, 1e-9)});
    } catch (const DomainError& e) {
      throw NumericalError(std::string("evolve: state invalid at t = ") + std::to_string(t) +
                           ": " + e.what());
    }
  }
  return traj;
}

EnergyLossReport delta_rho_first_order(const DensityMatrix& rho0, const SystemModel& model,
                                       const BathSpec& bath, double t, const UnitSystem& units) {
  if (rho0.dim() != model.system.dim) {
    throw DomainError("delta_rho_first_order: rho0 dimension mismatch");
  }
  if (t < 0.0) throw DomainError("delta_rho_first_order: t must be non-negative");
  const Eigen::MatrixXcd a = coupling_matrix(model, units);
  const Eigen::MatrixXcd dc = double_commutator(a, a * a, rho0.matrix());

  EnergyLossReport report;
  report.order = EnergyOrder::first_order;
  report.elapsed = t;
  report.delta_rho_diag = -dephasing_rate(bath, units) * t * dc.diagonal().real();
  report.first_order_warning = report.delta_rho_diag.cwiseAbs().maxCoeff() > 0.1;
  report.delta_e = report.delta_rho_diag.dot(model.system.eigenenergies(units));
  if (std::abs(report.delta_rho_diag.sum()) > 1e-9) {
    throw NumericalError("delta_rho_first_order: trace of diagonal shifts exceeds 1e-9");
  }
  return report;
}

EnergyLossReport energy_change_full(const Trajectory& trajectory, const OscillatorSystem& system,
                                    const UnitSystem& units) {
  if (trajectory.samples.size() < 2) {
    throw DomainError("energy_change_full: trajectory needs at least two samples");
  }
  const TrajectorySample& first = trajectory.samples.front();
  const TrajectorySample& last = trajectory.samples.back();
  const Eigen::MatrixXcd h = hamiltonian(system, units);

  EnergyLossReport report;
  report.order = EnergyOrder::full_evolution;
  report.elapsed = last.time - first.time;
  report.delta_rho_diag = last.state.populations() - first.state.populations();
  report.delta_e =
      ((h * last.state.matrix()).trace() - (h * first.state.matrix()).trace()).real();
  if (std::abs(report.delta_rho_diag.sum()) > 1e-9) {
    throw NumericalError("energy_change_full: trace of diagonal shifts exceeds 1e-9");
  }
  return report;
}

}  // namespace decosim
