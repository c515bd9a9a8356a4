#pragma once

// Projector chains over a finite-dimensional system (+) environment space and
// the decoherence functional over coarse-grained histories,
//
//   D(a', a) = Tr[ P^n_{a'_n}(t_n) ... P^1_{a'_1}(t_1) rho0
//                  P^1_{a_1}(t_1) ... P^n_{a_n}(t_n) ],
//
// with Heisenberg projectors P(t) = e^{iHt/hbar} P e^{-iHt/hbar}.

#include <Eigen/Dense>
#include <vector>

#include "decosim/common.hpp"
#include "decosim/oscillator.hpp"
#include "decosim/units.hpp"

namespace decosim {

// Hermitian idempotent matrix (tolerances 1e-12 / 1e-10).
class Projector {
 public:
  explicit Projector(Eigen::MatrixXcd matrix);

  int dim() const { return static_cast<int>(p_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return p_; }

 private:
  Eigen::MatrixXcd p_;
};

// |state><state| tensor the identity on an env_dim-dimensional environment,
// in the lexicographic product basis (system index major).
Projector make_projector(const StateVector& state, int env_dim);

// Heisenberg evolution U P U^dagger with U = exp(+i H t / hbar).
Projector evolve_projector(const Projector& p, const Eigen::MatrixXcd& hamiltonian, double t,
                           const UnitSystem& units);

// Exhaustive family for one time slot; must resolve the identity within 1e-10.
struct ProjectorFamily {
  std::vector<Projector> members;

  explicit ProjectorFamily(std::vector<Projector> members_);
  int dim() const { return members.front().dim(); }
  int size() const { return static_cast<int>(members.size()); }
};

struct HistorySlot {
  double time = 0.0;
  ProjectorFamily family;
};

// Shared time-ordered slots; a history is one projector choice per slot.
class HistorySet {
 public:
  explicit HistorySet(std::vector<HistorySlot> slots);

  const std::vector<HistorySlot>& slots() const { return slots_; }
  int n_slots() const { return static_cast<int>(slots_.size()); }
  int dim() const { return slots_.front().family.dim(); }
  // Number of distinct histories (product of family sizes).
  long n_histories() const;
  // Lexicographic flattening of a per-slot choice (first slot slowest).
  long flat_index(const std::vector<int>& choice) const;
  std::vector<int> choice_from_flat(long index) const;

 private:
  std::vector<HistorySlot> slots_;
};

Complex decoherence_functional(const HistorySet& set, const std::vector<int>& alpha_left,
                               const std::vector<int>& alpha_right, const DensityMatrix& rho0,
                               const Eigen::MatrixXcd& hamiltonian, const UnitSystem& units);

// Full functional over all history pairs, indexed by HistorySet::flat_index.
Eigen::MatrixXcd decoherence_functional_matrix(const HistorySet& set, const DensityMatrix& rho0,
                                               const Eigen::MatrixXcd& hamiltonian,
                                               const UnitSystem& units);

struct DecoherenceClassification {
  bool decoherent = false;
  double max_offdiag_magnitude = 0.0;
  // Largest |D_ab| / sqrt(D_aa D_bb) over pairs a != b.
  double max_offdiag_ratio = 0.0;
};

// Decoherent iff every off-diagonal magnitude is at most
// epsilon * (sqrt(D_aa D_bb) + 1e-300).
DecoherenceClassification classify_decoherent(const Eigen::MatrixXcd& functional, double epsilon);

}  // namespace decosim
