#pragma once

// Independent oracles for the rest of the library: a quantum Hamilton-Jacobi
// residual checker on grid wavefunctions, the position-basis quadrature form
// of the first-order diagonal shifts, and a brute-force unitary simulation of
// the system coupled to a handful of explicit bath oscillators.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "decosim/bath.hpp"
#include "decosim/common.hpp"
#include "decosim/oscillator.hpp"
#include "decosim/units.hpp"

namespace decosim {

enum class HJConvention {
  // RHS = (hbar^2/2m) [ (1/2)(grad ln p)^2 + laplacian(ln p) ].
  as_printed,
  // RHS = (hbar^2/2m) laplacian(sqrt p) / sqrt p  (the Madelung quantum
  // potential; exact solutions satisfy this form).
  standard_madelung,
};

struct ResidualReport {
  Eigen::VectorXd x;
  Eigen::VectorXd lhs;        // hbar dphi/dt + (hbar^2/2m)(grad phi)^2 + V
  Eigen::VectorXd rhs;        // per convention; NaN where not evaluated
  Eigen::VectorXd residual;   // lhs - rhs; NaN where not evaluated
  double interior_max_abs = 0.0;
  int n_evaluated = 0;
};

// Evaluates the phase equation residual from two time slices (forward
// difference for dphi/dt, 4th-order central stencils in x). Points within two
// nodes of the boundary or where p < 1e-12 are skipped; if fewer than 8
// points survive, throws DomainError (nodal region).
ResidualReport hamilton_jacobi_residual(const GridWavefunction& psi_a,
                                        const GridWavefunction& psi_b, double dt,
                                        const std::function<double(double)>& potential,
                                        double mass, const UnitSystem& units,
                                        HJConvention convention);

// Position-basis form of the first-order diagonal shift:
// -(eta Omega/pi hbar) t  iint rho0(x,y) psi_n(x) (x-y)^2 psi_n(y) dx dy
// by 2-D trapezoidal quadrature. rho0_grid must be rho(x_i, y_j) on the grid.
// Throws DomainError when the grid fails to contain rho0 or psi_n.
double delta_rho_quadrature(const Eigen::MatrixXcd& rho0_grid, const GridSpec& grid,
                            const OscillatorSystem& system, int n, const BathSpec& bath,
                            double t, const UnitSystem& units);

// One explicit environment oscillator.
struct BathMode {
  double frequency = 1.0;
  double coupling = 0.0;
  int dim = 2;
};

struct BathModeSet {
  std::vector<BathMode> modes;

  explicit BathModeSet(std::vector<BathMode> modes_);

  long env_dim() const;

  // Evenly spaced modes over (0, Omega] with ohmic weights
  // c_k = scale * sqrt(2 eta omega_k dw / pi); the overall normalization of
  // the couplings relative to eta is a convention, so downstream checks are
  // property-based rather than coefficient-matching.
  static BathModeSet ohmic(int n_modes, int local_dim, double eta, double omega_cut,
                           double scale = 1.0);
};

struct JointTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> reduced;  // system density matrices
  Eigen::VectorXd purity;
  Eigen::VectorXd joint_norm;
};

// Dense unitary evolution of |psi0> under
//   H = H_sys (x) 1 + 1 (x) H_bath + sum_k c_k A (x) q_k
// via one eigendecomposition, then partial trace over the bath at each sample
// time (negative times are allowed; evolution is exactly reversible).
// Joint dimension capped at 4096.
JointTrajectory exact_system_bath(const Eigen::MatrixXcd& h_system, const BathModeSet& modes,
                                  const Eigen::MatrixXcd& coupling_op,
                                  const Eigen::VectorXcd& psi0_joint,
                                  const std::vector<double>& t_samples, const UnitSystem& units);

// |system_state> (x) |all bath modes in their ground states>.
Eigen::VectorXcd joint_with_bath_ground(const StateVector& system_state, const BathModeSet& modes);

// Partial trace over the environment factor, lexicographic layout
// (system index major).
Eigen::MatrixXcd partial_trace_env(const Eigen::VectorXcd& psi_joint, int sys_dim, long env_dim);
Eigen::MatrixXcd partial_trace_env(const Eigen::MatrixXcd& rho_joint, int sys_dim, long env_dim);

}  // namespace decosim
