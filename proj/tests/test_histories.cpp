#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "decosim/histories.hpp"
#include "decosim/numeric.hpp"
#include "test_helpers.hpp"

using namespace decosim;

namespace {

const UnitSystem units;

StateVector basis_state(int n, int dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(n) = 1.0;
  return StateVector(std::move(v));
}

// Complete family from the columns of a unitary.
ProjectorFamily family_from_unitary(const Eigen::MatrixXcd& u, int env_dim = 1) {
  std::vector<Projector> members;
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const Eigen::VectorXcd col = u.col(c);
    members.push_back(make_projector(StateVector(col / col.norm()), env_dim));
  }
  return ProjectorFamily(std::move(members));
}

ProjectorFamily energy_family(int dim, int env_dim = 1) {
  return family_from_unitary(Eigen::MatrixXcd::Identity(dim, dim), env_dim);
}

}  // namespace

TEST_CASE("projector factory: idempotence, rank, explicit qubit tensor") {
  const Projector p = make_projector(basis_state(0, 2), 2);
  CHECK((p.matrix() * p.matrix() - p.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.matrix().trace().real() == doctest::Approx(2.0));
  CHECK(p.dim() == 4);
  Eigen::VectorXd diag = p.matrix().diagonal().real();
  CHECK(diag(0) == doctest::Approx(1.0));
  CHECK(diag(1) == doctest::Approx(1.0));
  CHECK(diag(2) == doctest::Approx(0.0));
  CHECK(diag(3) == doctest::Approx(0.0));

  auto gen = testutil::rng(40);
  const Eigen::MatrixXcd u = testutil::random_unitary(gen, 5);
  const Eigen::VectorXcd col = u.col(2);
  const Projector q = make_projector(StateVector(col), 3);
  CHECK((q.matrix() * q.matrix() - q.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(q.matrix().trace().real() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("projector validation rejects non-idempotent matrices") {
  Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(Projector{half}, DomainError);
}

TEST_CASE("heisenberg evolution of projectors") {
  auto gen = testutil::rng(41);
  const Eigen::MatrixXcd u = testutil::random_unitary(gen, 4);
  const Projector p = make_projector(StateVector(u.col(0)), 1);
  const Eigen::MatrixXcd h = testutil::random_hermitian(gen, 4);

  const Projector frozen = evolve_projector(p, h, 0.0, units);
  CHECK((frozen.matrix() - p.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // Commuting case: both diagonal in the same basis.
  Eigen::MatrixXcd h_diag = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) h_diag(i, i) = 0.3 * i + 0.1;
  const Projector p_diag = make_projector(basis_state(2, 4), 1);
  for (double t : {0.7, 3.9}) {
    const Projector moved = evolve_projector(p_diag, h_diag, t, units);
    CHECK((moved.matrix() - p_diag.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  }

  // Unitary similarity preserves the 0/1 spectrum and the rank.
  const Projector rotated = evolve_projector(p, h, 1.3, units);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rotated.matrix());
  for (double ev : es.eigenvalues()) {
    CHECK(std::min(std::abs(ev), std::abs(ev - 1.0)) < 1e-12);
  }
  CHECK(rotated.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(evolve_projector(p, testutil::random_hermitian(gen, 3), 1.0, units),
                  DomainError);
}

TEST_CASE("projector family must resolve the identity") {
  std::vector<Projector> incomplete;
  incomplete.push_back(make_projector(basis_state(0, 3), 1));
  incomplete.push_back(make_projector(basis_state(1, 3), 1));
  CHECK_THROWS_AS(ProjectorFamily{std::move(incomplete)}, DomainError);
}

TEST_CASE("single-slot functional gives Born probabilities") {
  auto gen = testutil::rng(42);
  const Eigen::MatrixXcd rho_m = testutil::random_density(gen, 4);
  const DensityMatrix rho{rho_m};
  const Eigen::MatrixXcd h = testutil::random_hermitian(gen, 4);

  const HistorySet set({{0.8, energy_family(4)}});
  double total = 0.0;
  for (int a = 0; a < 4; ++a) {
    const Complex d = decoherence_functional(set, {a}, {a}, rho, h, units);
    CHECK(std::abs(d.imag()) < 1e-13);
    CHECK(d.real() >= -1e-12);
    // Direct Born probability through the evolved projector.
    const Projector p = evolve_projector(Projector(energy_family(4).members[a]), h, 0.8, units);
    const double born = (p.matrix() * rho.matrix() * p.matrix()).trace().real();
    CHECK(d.real() == doctest::Approx(born).epsilon(1e-12));
    total += d.real();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("functional matrix is Hermitian, positive semidefinite, unit diagonal sum") {
  auto gen = testutil::rng(43);
  for (int trial = 0; trial < 4; ++trial) {
    const int dim = 4;
    const DensityMatrix rho{testutil::random_density(gen, dim)};
    const Eigen::MatrixXcd h = testutil::random_hermitian(gen, dim);
    const HistorySet set({{0.0, family_from_unitary(testutil::random_unitary(gen, dim))},
                          {1.1, family_from_unitary(testutil::random_unitary(gen, dim))}});
    const Eigen::MatrixXcd d = decoherence_functional_matrix(set, rho, h, units);

    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.diagonal().real().sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.diagonal().real().minCoeff() >= -1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("pairwise functional agrees with the assembled matrix") {
  auto gen = testutil::rng(44);
  const DensityMatrix rho{testutil::random_density(gen, 3)};
  const Eigen::MatrixXcd h = testutil::random_hermitian(gen, 3);
  const HistorySet set({{0.0, energy_family(3)},
                        {0.9, family_from_unitary(testutil::random_unitary(gen, 3))}});
  const Eigen::MatrixXcd d = decoherence_functional_matrix(set, rho, h, units);
  for (long a = 0; a < set.n_histories(); ++a) {
    for (long b = 0; b < set.n_histories(); ++b) {
      const Complex direct = decoherence_functional(set, set.choice_from_flat(a),
                                                    set.choice_from_flat(b), rho, h, units);
      CHECK(std::abs(direct - d(a, b)) < 1e-13);
    }
  }
}

TEST_CASE("complementary-basis qubit: hand-computed functional, not decoherent") {
  // rho = |+><+|, slot 1 in the energy basis, slot 2 in the conjugate basis,
  // H = 0. Diagonals are all 1/4; the (0,+)-(1,+) coherence is also 1/4.
  Eigen::VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(StateVector(plus));

  Eigen::MatrixXcd fourier(2, 2);
  fourier << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
      -1.0 / std::sqrt(2.0);
  const HistorySet set({{0.0, energy_family(2)}, {0.0, family_from_unitary(fourier)}});
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  const Eigen::MatrixXcd d = decoherence_functional_matrix(set, rho, h, units);

  for (int a = 0; a < 4; ++a) CHECK(d(a, a).real() == doctest::Approx(0.25).epsilon(1e-14));
  // Flat index: slot-1 choice slowest, so (a1=0,+) = 0 and (a1=1,+) = 2.
  CHECK(std::abs(d(0, 2) - Complex(0.25, 0.0)) < 1e-14);
  CHECK(std::abs(d(0, 1)) < 1e-14);

  const auto verdict = classify_decoherent(d, 0.1);
  CHECK_FALSE(verdict.decoherent);
  CHECK(verdict.max_offdiag_magnitude == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("commuting construction is decoherent at epsilon = 1e-10") {
  // Diagonal rho, energy projectors, oscillator-like H: everything commutes.
  const int dim = 4;
  Eigen::MatrixXcd rho_m = Eigen::MatrixXcd::Zero(dim, dim);
  rho_m.diagonal() << 0.4, 0.3, 0.2, 0.1;
  const DensityMatrix rho{rho_m};
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) h(i, i) = i + 0.5;

  const HistorySet set({{0.0, energy_family(dim)}, {2.3, energy_family(dim)}});
  const Eigen::MatrixXcd d = decoherence_functional_matrix(set, rho, h, units);
  CHECK(classify_decoherent(d, 1e-10).decoherent);

  Eigen::MatrixXcd diag_only = Eigen::MatrixXcd::Zero(3, 3);
  diag_only.diagonal() << 0.5, 0.3, 0.2;
  CHECK(classify_decoherent(diag_only, 1e-12).decoherent);
}

TEST_CASE("summing a complete final slot leaves the functional unchanged") {
  auto gen = testutil::rng(45);
  for (int dim : {3, 6}) {
    const DensityMatrix rho{testutil::random_density(gen, dim)};
    const Eigen::MatrixXcd h = testutil::random_hermitian(gen, dim);
    const ProjectorFamily fam1 = family_from_unitary(testutil::random_unitary(gen, dim));
    const ProjectorFamily fam2 = family_from_unitary(testutil::random_unitary(gen, dim));
    const ProjectorFamily fam3 = family_from_unitary(testutil::random_unitary(gen, dim));

    const HistorySet coarse({{0.0, fam1}, {0.7, fam2}});
    const HistorySet fine({{0.0, fam1}, {0.7, fam2}, {1.5, fam3}});

    for (int a1 = 0; a1 < dim; ++a1) {
      for (int b1 = 0; b1 < dim; ++b1) {
        const Complex want = decoherence_functional(coarse, {a1, 1}, {b1, 0}, rho, h, units);
        Complex summed = 0.0;
        for (int beta = 0; beta < dim; ++beta) {
          summed += decoherence_functional(fine, {a1, 1, beta}, {b1, 0, beta}, rho, h, units);
        }
        CHECK(std::abs(summed - want) < 1e-10);
      }
    }
  }
}

TEST_CASE("history set validation") {
  CHECK_THROWS_AS(HistorySet({{1.0, energy_family(3)}, {0.5, energy_family(3)}}), DomainError);
  const HistorySet set({{0.0, energy_family(3)}, {1.0, energy_family(3)}});
  auto gen = testutil::rng(46);
  const DensityMatrix rho{testutil::random_density(gen, 3)};
  const Eigen::MatrixXcd h = testutil::random_hermitian(gen, 3);
  CHECK_THROWS_AS(decoherence_functional(set, {0}, {0, 1}, rho, h, units), DomainError);
  CHECK_THROWS_AS(decoherence_functional(set, {0, 3}, {0, 1}, rho, h, units), DomainError);
  const DensityMatrix wrong_dim{testutil::random_density(gen, 4)};
  CHECK_THROWS_AS(decoherence_functional(set, {0, 1}, {0, 1}, wrong_dim, h, units), DomainError);
}
