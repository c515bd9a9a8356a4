#pragma once

// Density-matrix evolution under
//
//   d rho_nm / dt = -i omega_nm rho_nm - (eta Omega / pi hbar) <n|[A,[A,rho]]|m>
//
// with omega_nm = (E_n - E_m)/hbar and coupling A = x by default (replaceable
// by any Hermitian operator). The friction part of the bath kernel is
// deliberately absent and BathSpec::temperature is not consulted: this is the
// zero-temperature pure dephasing channel, which transfers energy upward even
// at T = 0. First-order diagonal shifts and the resulting energy change are
// provided alongside the full propagation.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "decosim/bath.hpp"
#include "decosim/common.hpp"
#include "decosim/oscillator.hpp"
#include "decosim/units.hpp"

namespace decosim {

struct EvolutionControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.0;      // 0 = uncapped
  double initial_step = 0.0;  // 0 = automatic

  EvolutionControl() = default;
  EvolutionControl(double rel_tol_, double abs_tol_, double max_step_ = 0.0,
                   double initial_step_ = 0.0);
};

// Oscillator plus the operator the bath couples to (x unless overridden).
struct SystemModel {
  OscillatorSystem system;
  std::optional<Eigen::MatrixXcd> coupling;

  SystemModel(OscillatorSystem system_) : system(system_) {}  // NOLINT(implicit)
};

// Returns a model whose dissipator couples through `op` instead of x.
// Rejects non-Hermitian or mismatched operators.
SystemModel coupling_operator_override(const SystemModel& model, const Eigen::MatrixXcd& op);

Eigen::MatrixXcd coupling_matrix(const SystemModel& model, const UnitSystem& units);

// -(eta Omega / pi hbar) [A, [A, rho]].
Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& rho, const SystemModel& model,
                            const BathSpec& bath, const UnitSystem& units);

struct TrajectorySample {
  double time;
  DensityMatrix state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  long n_accepted_steps = 0;
  long n_rejected_steps = 0;
};

// Propagates rho0 and samples at the given times (first entry may be 0 to
// include the initial state). Hermiticity is restored after every accepted
// step. Aborts with NumericalError if an eigenvalue drops below -1e-6 or the
// top two Fock populations exceed 1e-6 (truncation guard).
Trajectory evolve(const DensityMatrix& rho0, const SystemModel& model, const BathSpec& bath,
                  const std::vector<double>& sample_times, const EvolutionControl& ctrl,
                  const UnitSystem& units);

enum class EnergyOrder { first_order, full_evolution };

struct EnergyLossReport {
  Eigen::VectorXd delta_rho_diag;
  double delta_e = 0.0;
  double elapsed = 0.0;
  EnergyOrder order = EnergyOrder::first_order;
  // Set when |delta_rho_nn| exceeds 0.1 somewhere (first-order validity).
  bool first_order_warning = false;
};

// First-order diagonal shifts delta_rho_nn = -(eta Omega/pi hbar) t
// <n|[A,[A,rho0]]|n> and delta_E = sum_n delta_rho_nn E_n.
EnergyLossReport delta_rho_first_order(const DensityMatrix& rho0, const SystemModel& model,
                                       const BathSpec& bath, double t, const UnitSystem& units);

// Non-perturbative counterpart from a propagated trajectory: delta_E from
// Tr[H rho(t)] - Tr[H rho(0)], diagonal shifts from population differences.
EnergyLossReport energy_change_full(const Trajectory& trajectory, const OscillatorSystem& system,
                                    const UnitSystem& units);

}  // namespace decosim
