#include "decosim/histories.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "decosim/numeric.hpp"

namespace decosim {

namespace {
constexpr int kDimensionCap = 256;
}

Projector::Projector(Eigen::MatrixXcd matrix) : p_(std::move(matrix)) {
  if (p_.rows() != p_.cols() || p_.rows() < 1) {
    throw DomainError("Projector: matrix must be square");
  }
  if (p_.rows() > kDimensionCap) throw DomainError("Projector: dimension cap 256 exceeded");
  if (!is_hermitian(p_, 1e-12)) throw DomainError("Projector: not Hermitian within 1e-12");
  if ((p_ * p_ - p_).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("Projector: not idempotent within 1e-10");
  }
}

Projector make_projector(const StateVector& state, int env_dim) {
  if (env_dim < 1) throw DomainError("make_projector: env_dim must be at least 1");
  const Eigen::VectorXcd& a = state.amplitudes();
  const Eigen::MatrixXcd outer = a * a.adjoint();
  return Projector(kron(outer, Eigen::MatrixXcd::Identity(env_dim, env_dim)));
}

Projector evolve_projector(const Projector& p, const Eigen::MatrixXcd& hamiltonian, double t,
                           const UnitSystem& units) {
  if (hamiltonian.rows() != p.dim() || hamiltonian.cols() != p.dim()) {
    throw DomainError("evolve_projector: Hamiltonian dimension mismatch");
  }
  if (!is_hermitian(hamiltonian, 1e-10 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()))) {
    throw DomainError("evolve_projector: Hamiltonian not Hermitian");
  }
  if (t == 0.0) return p;
  const Eigen::MatrixXcd u = (Complex(0.0, t / units.hbar) * hamiltonian).exp();
  return Projector(u * p.matrix() * u.adjoint());
}

ProjectorFamily::ProjectorFamily(std::vector<Projector> members_) : members(std::move(members_)) {
  if (members.empty()) throw DomainError("ProjectorFamily: no members");
  const int d = members.front().dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const Projector& p : members) {
    if (p.dim() != d) throw DomainError("ProjectorFamily: mixed dimensions");
    sum += p.matrix();
  }
  if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("ProjectorFamily: members do not resolve the identity within 1e-10");
  }
}

HistorySet::HistorySet(std::vector<HistorySlot> slots) : slots_(std::move(slots)) {
  if (slots_.empty()) throw DomainError("HistorySet: need at least one slot");
  const int d = slots_.front().family.dim();
  for (size_t k = 0; k < slots_.size(); ++k) {
    if (slots_[k].family.dim() != d) throw DomainError("HistorySet: mixed dimensions");
    if (k > 0 && slots_[k].time < slots_[k - 1].time) {
      throw DomainError("HistorySet: slot times must be non-decreasing");
    }
  }
}

long HistorySet::n_histories() const {
  long n = 1;
  for (const auto& slot : slots_) n *= slot.family.size();
  return n;
}

long HistorySet::flat_index(const std::vector<int>& choice) const {
  if (choice.size() != slots_.size()) throw DomainError("HistorySet: choice length mismatch");
  long index = 0;
  for (size_t k = 0; k < slots_.size(); ++k) {
    const int size = slots_[k].family.size();
    if (choice[k] < 0 || choice[k] >= size) throw DomainError("HistorySet: choice out of range");
    index = index * size + choice[k];
  }
  return index;
}

std::vector<int> HistorySet::choice_from_flat(long index) const {
  std::vector<int> choice(slots_.size());
  for (size_t k = slots_.size(); k-- > 0;) {
    const int size = slots_[k].family.size();
    choice[k] = static_cast<int>(index % size);
    index /= size;
  }
  return choice;
}

namespace {

// Heisenberg-evolved members of every slot, sharing one exponential per slot.
std::vector<std::vector<Eigen::MatrixXcd>> evolved_families(const HistorySet& set,
                                                            const Eigen::MatrixXcd& hamiltonian,
                                                            const UnitSystem& units) {
  std::vector<std::vector<Eigen::MatrixXcd>> out;
  out.reserve(set.n_slots());
  for (const HistorySlot& slot : set.slots()) {
    Eigen::MatrixXcd u;
    const bool trivial = (slot.time == 0.0);
    if (!trivial) u = (Complex(0.0, slot.time / units.hbar) * hamiltonian).exp();
    std::vector<Eigen::MatrixXcd> evolved;
    evolved.reserve(slot.family.size());
    for (const Projector& p : slot.family.members) {
      evolved.push_back(trivial ? p.matrix() : Eigen::MatrixXcd(u * p.matrix() * u.adjoint()));
    }
    out.push_back(std::move(evolved));
  }
  return out;
}

// Chain operator C_a = P^n(t_n) ... P^1(t_1) for one history.
Eigen::MatrixXcd chain_operator(const std::vector<std::vector<Eigen::MatrixXcd>>& families,
                                const std::vector<int>& choice) {
  Eigen::MatrixXcd c = families.front()[choice.front()];
  for (size_t k = 1; k < families.size(); ++k) {
    c = families[k][choice[k]] * c;
  }
  return c;
}

void check_inputs(const HistorySet& set, const DensityMatrix& rho0,
                  const Eigen::MatrixXcd& hamiltonian) {
  if (rho0.dim() != set.dim()) throw DomainError("decoherence_functional: rho0 dimension mismatch");
  if (hamiltonian.rows() != set.dim() || hamiltonian.cols() != set.dim()) {
    throw DomainError("decoherence_functional: Hamiltonian dimension mismatch");
  }
  if (!is_hermitian(hamiltonian, 1e-10 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()))) {
    throw DomainError("decoherence_functional: Hamiltonian not Hermitian");
  }
}

}  // namespace

Complex decoherence_functional(const HistorySet& set, const std::vector<int>& alpha_left,
                               const std::vector<int>& alpha_right, const DensityMatrix& rho0,
                               const Eigen::MatrixXcd& hamiltonian, const UnitSystem& units) {
  check_inputs(set, rho0, hamiltonian);
  if (static_cast<int>(alpha_left.size()) != set.n_slots() ||
      static_cast<int>(alpha_right.size()) != set.n_slots()) {
    throw DomainError("decoherence_functional: history length does not match slots");
  }
  set.flat_index(alpha_left);
  set.flat_index(alpha_right);
  const auto families = evolved_families(set, hamiltonian, units);
  const Eigen::MatrixXcd c_left = chain_operator(families, alpha_left);
  const Eigen::MatrixXcd c_right = chain_operator(families, alpha_right);
  return (c_left * rho0.matrix() * c_right.adjoint()).trace();
}

Eigen::MatrixXcd decoherence_functional_matrix(const HistorySet& set, const DensityMatrix& rho0,
                                               const Eigen::MatrixXcd& hamiltonian,
                                               const UnitSystem& units) {
  check_inputs(set, rho0, hamiltonian);
  const auto families = evolved_families(set, hamiltonian, units);
  const long n = set.n_histories();
  std::vector<Eigen::MatrixXcd> chains;
  chains.reserve(n);
  for (long a = 0; a < n; ++a) {
    chains.push_back(chain_operator(families, set.choice_from_flat(a)));
  }
  Eigen::MatrixXcd d(n, n);
  for (long a = 0; a < n; ++a) {
    const Eigen::MatrixXcd left = chains[a] * rho0.matrix();
    for (long b = 0; b < n; ++b) {
      d(a, b) = (left * chains[b].adjoint()).trace();
    }
  }
  return d;
}

DecoherenceClassification classify_decoherent(const Eigen::MatrixXcd& functional,
                                              double epsilon) {
  if (functional.rows() != functional.cols()) {
    throw DomainError("classify_decoherent: matrix must be square");
  }
  if (!(epsilon > 0.0)) throw DomainError("classify_decoherent: epsilon must be positive");
  DecoherenceClassification result;
  result.decoherent = true;
  for (Eigen::Index a = 0; a < functional.rows(); ++a) {
    for (Eigen::Index b = 0; b < functional.cols(); ++b) {
      if (a == b) continue;
      const double mag = std::abs(functional(a, b));
      const double gm = std::sqrt(std::max(functional(a, a).real(), 0.0) *
                                  std::max(functional(b, b).real(), 0.0));
      result.max_offdiag_magnitude = std::max(result.max_offdiag_magnitude, mag);
      if (gm > 0.0) result.max_offdiag_ratio = std::max(result.max_offdiag_ratio, mag / gm);
      if (mag > epsilon * (gm + 1e-300)) result.decoherent = false;
    }
  }
  return result;
}

}  // namespace decosim
