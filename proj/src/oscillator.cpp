#include "decosim/oscillator.hpp"

#include <cmath>

#include "decosim/numeric.hpp"

namespace decosim {

OscillatorSystem::OscillatorSystem(double mass_, double omega_, int dim_)
    : mass(mass_), omega(omega_), dim(dim_) {
  if (!(mass > 0.0)) throw DomainError("OscillatorSystem: mass must be positive");
  if (!(omega > 0.0)) throw DomainError("OscillatorSystem: omega must be positive");
  if (dim < 2) throw DomainError("OscillatorSystem: dim must be at least 2");
}

Eigen::VectorXd OscillatorSystem::eigenenergies(const UnitSystem& units) const {
  Eigen::VectorXd e(dim);
  for (int n = 0; n < dim; ++n) e(n) = energy(n, units);
  return e;
}

double OscillatorSystem::length_scale(const UnitSystem& units) const {
  return std::sqrt(units.hbar / (mass * omega));
}

Eigen::MatrixXcd position_operator(const OscillatorSystem& system, const UnitSystem& units) {
  const double scale = std::sqrt(units.hbar / (2.0 * system.mass * system.omega));
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(system.dim, system.dim);
  for (int n = 0; n + 1 < system.dim; ++n) {
    const double v = scale * std::sqrt(static_cast<double>(n + 1));
    x(n, n + 1) = v;
    x(n + 1, n) = v;
  }
  return x;
}

Eigen::MatrixXcd hamiltonian(const OscillatorSystem& system, const UnitSystem& units) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(system.dim, system.dim);
  for (int n = 0; n < system.dim; ++n) h(n, n) = system.energy(n, units);
  return h;
}

StateVector::StateVector(Eigen::VectorXcd amplitudes, double truncation_tail)
    : amps_(std::move(amplitudes)), truncation_tail_(truncation_tail) {
  if (amps_.size() < 1) throw DomainError("StateVector: empty amplitude vector");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw DomainError("StateVector: norm deviates from 1 by more than 1e-12");
  }
}

Complex StateVector::expectation(const Eigen::MatrixXcd& op) const {
  if (op.rows() != amps_.size() || op.cols() != amps_.size()) {
    throw DomainError("StateVector::expectation: operator dimension mismatch");
  }
  return amps_.dot(op * amps_);  // dot conjugates the left argument
}

StateVector fock_state(int n, int dim) {
  if (n < 0 || n >= dim) throw DomainError("fock_state: level out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(n) = 1.0;
  return StateVector(std::move(v));
}

namespace {

// Untruncated coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), plus the
// weight left above the truncation.
std::pair<Eigen::VectorXcd, double> coherent_amplitudes(Complex alpha, int dim) {
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) {
    c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  const double captured = c.squaredNorm();
  return {c, std::max(0.0, 1.0 - captured)};
}

}  // namespace

StateVector coherent_state(Complex alpha, int dim) {
  if (dim < 2) throw DomainError("coherent_state: dim must be at least 2");
  auto [c, tail] = coherent_amplitudes(alpha, dim);
  c /= c.norm();
  return StateVector(std::move(c), tail);
}

StateVector cat_state(Complex alpha, int dim) {
  if (dim < 2) throw DomainError("cat_state: dim must be at least 2");
  auto [cp, tail_p] = coherent_amplitudes(alpha, dim);
  auto [cm, tail_m] = coherent_amplitudes(-alpha, dim);
  Eigen::VectorXcd c = cp + cm;
  const double norm = c.norm();
  if (!(norm > 0.0)) throw DomainError("cat_state: degenerate superposition");
  c /= norm;
  return StateVector(std::move(c), std::max(tail_p, tail_m));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho, double positivity_tol, double trace_tol)
    : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw DomainError("DensityMatrix: matrix must be square");
  }
  if (!is_hermitian(rho_, 1e-12)) {
    throw DomainError("DensityMatrix: matrix not Hermitian within 1e-12");
  }
  if (std::abs(rho_.trace().real() - 1.0) > trace_tol ||
      std::abs(rho_.trace().imag()) > trace_tol) {
    throw DomainError("DensityMatrix: trace deviates from 1 beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -positivity_tol) {
    throw DomainError("DensityMatrix: negative eigenvalue beyond tolerance");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  const Eigen::VectorXcd& a = state.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

GridSpec::GridSpec(double x_min_, double x_max_, int n_points_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
  if (!(x_max > x_min)) throw DomainError("GridSpec: x_max must exceed x_min");
  if (n_points < 16) throw DomainError("GridSpec: need at least 16 points");
}

Eigen::VectorXd GridSpec::points() const {
  return Eigen::VectorXd::LinSpaced(n_points, x_min, x_max);
}

GridWavefunction::GridWavefunction(GridSpec grid_, Eigen::VectorXcd values_, bool normalized_)
    : grid(grid_), values(std::move(values_)), normalized(normalized_) {
  if (values.size() != grid.n_points) {
    throw DomainError("GridWavefunction: value count does not match grid");
  }
  if (normalized && std::abs(discrete_norm_sq() - 1.0) > 1e-8) {
    throw DomainError("GridWavefunction: discrete norm deviates from 1 beyond 1e-8");
  }
}

Eigen::VectorXd GridWavefunction::phase_raw() const {
  Eigen::VectorXd phi(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) phi(i) = std::arg(values(i));
  return phi;
}

double GridWavefunction::discrete_norm_sq() const {
  return trapezoid(probability_density(), grid.spacing());
}

Eigen::VectorXd hermite_function_values(const OscillatorSystem& system, int n,
                                        const Eigen::VectorXd& x, const UnitSystem& units) {
  if (n < 0 || n >= system.dim) throw DomainError("hermite_function_values: level out of range");
  const double inv_len = 1.0 / system.length_scale(units);
  const Eigen::VectorXd xi = x * inv_len;
  // Normalized Hermite functions h_n(xi); psi_n(x) = sqrt(1/len) h_n(xi).
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd cur =
      (std::pow(kPi, -0.25) * (-0.5 * xi.array().square()).exp()).matrix();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd next =
        (std::sqrt(2.0 / (k + 1)) * xi.array() * cur.array() -
         std::sqrt(static_cast<double>(k) / (k + 1)) * prev.array())
            .matrix();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return std::sqrt(inv_len) * cur;
}

GridWavefunction eigenfunction_grid(const OscillatorSystem& system, int n,
                                    const GridSpec& grid, const UnitSystem& units) {
  Eigen::VectorXd psi = hermite_function_values(system, n, grid.points(), units);
  const double captured = trapezoid(psi.cwiseAbs2(), grid.spacing());
  if (std::abs(1.0 - captured) > 1e-8) {
    throw DomainError("eigenfunction_grid: grid too small, tail mass exceeds 1e-8");
  }
  psi /= std::sqrt(captured);
  return GridWavefunction(grid, psi.cast<Complex>(), true);
}

Eigen::MatrixXcd density_position_grid(const DensityMatrix& rho, const OscillatorSystem& system,
                                       const GridSpec& grid, const UnitSystem& units) {
  if (rho.dim() != system.dim) throw DomainError("density_position_grid: dimension mismatch");
  const Eigen::VectorXd x = grid.points();
  Eigen::MatrixXd basis(grid.n_points, system.dim);
  for (int n = 0; n < system.dim; ++n) {
    basis.col(n) = hermite_function_values(system, n, x, units);
  }
  const Eigen::MatrixXcd basis_c = basis.cast<Complex>();
  return basis_c * rho.matrix() * basis_c.transpose();
}

Complex density_position_point(const DensityMatrix& rho, const OscillatorSystem& system,
                               double x, double y, const UnitSystem& units) {
  if (rho.dim() != system.dim) throw DomainError("density_position_point: dimension mismatch");
  Eigen::VectorXd pt(2);
  pt << x, y;
  Eigen::VectorXcd fx(system.dim);
  Eigen::VectorXcd fy(system.dim);
  for (int n = 0; n < system.dim; ++n) {
    const Eigen::VectorXd vals = hermite_function_values(system, n, pt, units);
    fx(n) = vals(0);
    fy(n) = vals(1);
  }
  return fx.transpose() * rho.matrix() * fy;
}

}  // namespace decosim
