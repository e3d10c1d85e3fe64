#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "speclab/channels.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/spectral.hpp"

using namespace speclab;

namespace {

KrausSet identity_channel(Index n) { return KrausSet({ComplexMatrix::Identity(n, n)}); }

// rho -> I/N through the N^2 operators |i><j| / sqrt(N)
KrausSet depolarizing(Index n) {
  std::vector<ComplexMatrix> ops;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(i, j) = 1.0 / std::sqrt(static_cast<double>(n));
      ops.push_back(a);
    }
  return KrausSet(ops);
}

// superoperator of rho -> rho^T, written entry by entry
Superoperator transpose_map(Index n) {
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) s(i * n + j, j * n + i) = 1.0;
  return Superoperator(s);
}

}  // namespace

TEST_CASE("vectorize round trip, row-major") {
  ComplexMatrix rho(2, 2);
  rho << 1, 2, 3, 4;
  const ComplexVector v = vectorize(rho);
  CHECK(v(1) == Complex(2));
  CHECK(v(2) == Complex(3));
  CHECK(unvectorize(v, 2) == rho);
  CHECK_THROWS_AS(unvectorize(v, 3), DimensionError);
}

TEST_CASE("kraus set validation") {
  CHECK_THROWS_AS(KrausSet({}), PreconditionError);
  CHECK_THROWS_AS(KrausSet({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), DimensionError);
  CHECK_THROWS_AS(KrausSet({ComplexMatrix::Zero(2, 3)}), DimensionError);
  CHECK_THROWS_AS(Superoperator(ComplexMatrix::Identity(5, 5)), DimensionError);
}

TEST_CASE("superoperator of identity and of a unitary") {
  const Superoperator id = superoperator_from_kraus(identity_channel(3));
  CHECK(max_abs(ComplexMatrix(id.matrix() - ComplexMatrix::Identity(9, 9))) == 0.0);

  Rng rng(4);
  const ComplexMatrix u = haar_unitary(4, rng);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(u);
  std::vector<Complex> expected;
  for (Index j = 0; j < 4; ++j)
    for (Index k = 0; k < 4; ++k) expected.push_back(es.eigenvalues()(j) * std::conj(es.eigenvalues()(k)));
  const auto got = eig_general(superoperator_from_kraus(KrausSet({u})).matrix());
  CHECK(spectrum_distance(got, expected) < 1e-10);
}

TEST_CASE("kraus and superoperator routes agree") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 4;
    const KrausSet k = trial % 2 ? environmental_channel(n, 3, rng) : random_external_fields(n, 2, rng);
    const ComplexMatrix rho = test::random_state(n, rng);
    const ComplexMatrix a = apply_channel(k, rho);
    const ComplexMatrix b = apply_superoperator(superoperator_from_kraus(k), rho);
    CHECK(max_abs(ComplexMatrix(a - b)) < 1e-10);
  }
  const ComplexMatrix rho = test::random_state(3, rng);
  CHECK(max_abs(ComplexMatrix(apply_channel(identity_channel(3), rho) - rho)) == 0.0);
  CHECK_THROWS_AS(apply_channel(identity_channel(2), rho), DimensionError);
}

TEST_CASE("bistochastic maps fix the maximally mixed state") {
  Rng rng(12);
  const KrausSet k = random_external_fields(5, 3, rng);
  const ComplexMatrix mixed = ComplexMatrix::Identity(5, 5) / 5.0;
  CHECK(max_abs(ComplexMatrix(apply_channel(k, mixed) - mixed)) < 1e-10);
}

TEST_CASE("trace preservation check") {
  const auto half = is_trace_preserving(KrausSet({ComplexMatrix::Identity(2, 2) / 2.0}));
  CHECK_FALSE(half.ok);
  CHECK(half.residual == doctest::Approx(0.75));

  Rng rng(13);
  const double p[] = {0.2, 0.5, 0.3};
  std::vector<ComplexMatrix> ops;
  for (double w : p) ops.push_back(std::sqrt(w) * haar_unitary(4, rng));
  CHECK(is_trace_preserving(KrausSet(ops)).ok);
}

TEST_CASE("choi matrix oracles") {
  // identity: projector on the maximally entangled state
  const ChoiMatrix c = choi_matrix(superoperator_from_kraus(identity_channel(3)));
  CHECK(std::abs(c.matrix().trace() - 1.0) < 1e-14);
  CHECK(max_abs(ComplexMatrix(c.matrix() * c.matrix() - c.matrix())) < 1e-14);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c.matrix());
  CHECK(es.eigenvalues()(8) == doctest::Approx(1.0));
  CHECK(std::abs(es.eigenvalues()(7)) < 1e-14);

  // depolarizing: I / N^2
  const ChoiMatrix dep = choi_matrix(superoperator_from_kraus(depolarizing(3)));
  CHECK(max_abs(ComplexMatrix(dep.matrix() - ComplexMatrix::Identity(9, 9) / 9.0)) < 1e-15);

  // reshuffle is an involution
  Rng rng(14);
  const Superoperator s = superoperator_from_kraus(environmental_channel(3, 2, rng));
  CHECK(max_abs(ComplexMatrix(superoperator_from_choi(choi_matrix(s)).matrix() - s.matrix())) < 1e-14);
}

TEST_CASE("complete positivity") {
  const auto t = is_completely_positive(transpose_map(2));
  CHECK_FALSE(t.ok);
  CHECK(t.min_eigenvalue == doctest::Approx(-0.5));

  const auto id = is_completely_positive(superoperator_from_kraus(identity_channel(2)));
  CHECK(id.ok);
  CHECK(std::abs(id.min_eigenvalue) < 1e-14);

  Rng rng(15);
  for (int i = 0; i < 5; ++i) CHECK(is_completely_positive(superoperator_from_kraus(environmental_channel(4, 3, rng))).ok);

  // M = N^2: full-rank Choi matrix
  const auto full = is_completely_positive(superoperator_from_kraus(environmental_channel(3, 9, rng)));
  CHECK(full.min_eigenvalue > 1e-12);
}

TEST_CASE("generator basis is orthonormal and traceless") {
  for (Index n : {2, 3, 5}) {
    const auto& basis = generator_basis(n);
    REQUIRE(static_cast<Index>(basis.size()) == n * n);
    for (std::size_t a = 1; a < basis.size(); ++a) {
      CHECK(std::abs(basis[a].trace()) < 1e-14);
      CHECK(max_abs(ComplexMatrix(basis[a] - basis[a].adjoint())) < 1e-15);
    }
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const Complex ip = (basis[a].adjoint() * basis[b]).trace();
        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-14);
      }
  }
}

TEST_CASE("bloch form") {
  const BlochForm id = bloch_form(superoperator_from_kraus(identity_channel(3)));
  CHECK(id.kappa.norm() < 1e-14);
  CHECK((id.contraction - RealMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);

  Rng rng(16);
  const BlochForm unital = bloch_form(superoperator_from_kraus(random_external_fields(4, 3, rng)));
  CHECK(unital.kappa.norm() < 1e-10);

  // spectra of C plus {1} match the full superoperator
  for (int i = 0; i < 5; ++i) {
    const Superoperator s = superoperator_from_kraus(environmental_channel(4, 3, rng));
    const BlochForm b = bloch_form(s);
    std::vector<Complex> viab{1.0};
    for (const auto& e : eig_real_schur(b.contraction)) viab.push_back(e.value);
    CHECK(spectrum_distance(viab, eig_general(s.matrix())) < 1e-8);
    // first row of the full real form is (1, 0, ..., 0) for a trace-preserving map
    CHECK(std::abs(b.full(0, 0) - 1.0) < 1e-12);
    CHECK(b.full.row(0).tail(15).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("invariant state") {
  Rng rng(17);
  const InvariantState bist = invariant_state(superoperator_from_kraus(random_external_fields(4, 3, rng)));
  CHECK(max_abs(ComplexMatrix(bist.state - ComplexMatrix::Identity(4, 4) / 4.0)) < 1e-8);

  const Superoperator s = superoperator_from_kraus(environmental_channel(4, 16, rng));
  const InvariantState w = invariant_state(s);
  CHECK(w.residual < 1e-8);
  CHECK(state_defects(w.state).min_eigenvalue >= -1e-10);
  CHECK(std::abs(w.state.trace() - 1.0) < 1e-12);
  CHECK(max_abs(ComplexMatrix(apply_superoperator(s, w.state) - w.state)) < 1e-8);

  CHECK_THROWS_AS(invariant_state(superoperator_from_kraus(KrausSet({haar_unitary(3, rng)}))),
                  DegenerateSpectrumError);
}
