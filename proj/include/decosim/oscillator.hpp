#pragma once

// Truncated Fock-space operator algebra for a single harmonic mode, plus
// the states (coherent, cat), density matrices and grid wavefunctions the
// rest of the library is built on. All types are immutable values; all
// operations are pure functions.

#include <Eigen/Dense>
#include <optional>

#include "decosim/common.hpp"
#include "decosim/units.hpp"

namespace decosim {

struct OscillatorSystem {
  double mass = 1.0;
  double omega = 1.0;
  int dim = 32;

  OscillatorSystem() = default;
  OscillatorSystem(double mass_, double omega_, int dim_);

  double energy(int n, const UnitSystem& units) const {
    return units.hbar * omega * (n + 0.5);
  }
  Eigen::VectorXd eigenenergies(const UnitSystem& units) const;
  // Oscillator length sqrt(hbar / (m omega)).
  double length_scale(const UnitSystem& units) const;
};

// x in the Fock basis: sqrt(hbar/2m omega) (a + a^dagger), tridiagonal.
Eigen::MatrixXcd position_operator(const OscillatorSystem& system, const UnitSystem& units);

// diag(hbar omega (n + 1/2)).
Eigen::MatrixXcd hamiltonian(const OscillatorSystem& system, const UnitSystem& units);

// Normalized ket in the truncated Fock space. `truncation_tail` records the
// weight the untruncated state carries above the top level; factories set it
// so callers can notice a too-small dim (warning threshold 1e-8).
class StateVector {
 public:
  explicit StateVector(Eigen::VectorXcd amplitudes, double truncation_tail = 0.0);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  double truncation_tail() const { return truncation_tail_; }
  bool truncation_warning() const { return truncation_tail_ > 1e-8; }

  Complex expectation(const Eigen::MatrixXcd& op) const;

 private:
  Eigen::VectorXcd amps_;
  double truncation_tail_;
};

StateVector fock_state(int n, int dim);
StateVector coherent_state(Complex alpha, int dim);
// Even superposition (|alpha> + |-alpha>)/norm; collapses to |0> at alpha=0.
StateVector cat_state(Complex alpha, int dim);

// Complex Hermitian unit-trace matrix with non-negative spectrum. The
// positivity and trace tolerances are widened by the propagator, which can
// transiently produce slightly negative eigenvalues under truncation.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho, double positivity_tol = 1e-10,
                         double trace_tol = 1e-10);

  static DensityMatrix pure(const StateVector& state);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::VectorXd populations() const { return rho_.diagonal().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  Eigen::MatrixXcd rho_;
};

struct GridSpec {
  double x_min = -8.0;
  double x_max = 8.0;
  int n_points = 1024;

  GridSpec() = default;
  GridSpec(double x_min_, double x_max_, int n_points_);

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  Eigen::VectorXd points() const;
};

// Complex wavefunction sampled on a uniform grid. `normalized` asserts the
// discrete (trapezoidal) norm is 1 within 1e-8; leave it false for states
// that are not normalizable on the window (plane waves).
struct GridWavefunction {
  GridSpec grid;
  Eigen::VectorXcd values;
  bool normalized = true;

  GridWavefunction(GridSpec grid_, Eigen::VectorXcd values_, bool normalized_ = true);

  Eigen::VectorXd probability_density() const { return values.cwiseAbs2(); }
  Eigen::VectorXd phase_raw() const;
  double discrete_norm_sq() const;
};

// Hermite-function values of eigenstate n, analytic normalization. No grid
// coverage check; used internally by the grid transforms.
Eigen::VectorXd hermite_function_values(const OscillatorSystem& system, int n,
                                        const Eigen::VectorXd& x, const UnitSystem& units);

// Eigenfunction psi_n sampled on the grid and discretely renormalized.
// Throws DomainError when the grid misses more than 1e-8 of the state.
GridWavefunction eigenfunction_grid(const OscillatorSystem& system, int n,
                                    const GridSpec& grid, const UnitSystem& units);

// Position representation rho(x_i, y_j) = sum_nm psi_n(x_i) rho_nm psi_m(y_j).
Eigen::MatrixXcd density_position_grid(const DensityMatrix& rho, const OscillatorSystem& system,
                                       const GridSpec& grid, const UnitSystem& units);

// rho(x, y) at a single pair of points; cheap Hermite contraction.
Complex density_position_point(const DensityMatrix& rho, const OscillatorSystem& system,
                               double x, double y, const UnitSystem& units);

}  // namespace decosim
