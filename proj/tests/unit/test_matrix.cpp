#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "speclab/errors.hpp"
#include "speclab/matrix.hpp"

using namespace speclab;

TEST_CASE("dft: small sizes and unitarity") {
  CHECK(max_abs(ComplexMatrix(dft_matrix(1) - ComplexMatrix::Ones(1, 1))) == 0.0);

  ComplexMatrix f2(2, 2);
  f2 << 1, 1, 1, -1;
  f2 /= std::sqrt(2.0);
  CHECK(max_abs(ComplexMatrix(dft_matrix(2) - f2)) < 1e-15);

  const ComplexMatrix f16 = dft_matrix(16);
  CHECK(max_abs(ComplexMatrix(f16 * f16.adjoint() - ComplexMatrix::Identity(16, 16))) < 1e-12);
  // forward sign convention
  CHECK(std::abs(dft_matrix(4)(1, 1) - Complex(0, -0.5)) < 1e-15);
  CHECK_THROWS_AS(dft_matrix(0), PreconditionError);
}

TEST_CASE("cyclic shift") {
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(max_abs(ComplexMatrix(cyclic_shift(2) - swap)) == 0.0);

  const ComplexMatrix s4 = cyclic_shift(4);
  ComplexVector e3 = ComplexVector::Zero(4);
  e3(3) = 1;
  ComplexVector e0 = ComplexVector::Zero(4);
  e0(0) = 1;
  CHECK((s4 * e3 - e0).norm() == 0.0);

  for (Index n : {1, 3, 7}) {
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    for (Index k = 0; k < n; ++k) p = cyclic_shift(n) * p;
    CHECK(max_abs(ComplexMatrix(p - ComplexMatrix::Identity(n, n))) == 0.0);
    CHECK(max_abs(ComplexMatrix(cyclic_shift(n, n) - ComplexMatrix::Identity(n, n))) == 0.0);
    CHECK(max_abs(ComplexMatrix(cyclic_shift(n, -1) * cyclic_shift(n, 1) - ComplexMatrix::Identity(n, n))) == 0.0);
  }
}

TEST_CASE("eig_general: known spectra") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 1.0, Complex(0, 1), -0.5;
  CHECK(spectrum_distance(eig_general(d), {1.0, Complex(0, 1), -0.5}) < 1e-14);

  ComplexMatrix companion(2, 2);  // z^2 - 1
  companion << 0, 1, 1, 0;
  CHECK(spectrum_distance(eig_general(companion), {1.0, -1.0}) < 1e-14);

  Rng rng(7);
  const auto lambda = eig_general(haar_unitary(12, rng));
  for (const auto& z : lambda) CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);

  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eig_general(bad), PreconditionError);
  CHECK_THROWS_AS(eig_general(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("eig_real_schur: flags and pairing") {
  RealMatrix rot(2, 2);
  rot << 0, 1, -1, 0;
  auto ev = eig_real_schur(rot);
  REQUIRE(ev.size() == 2);
  CHECK(std::count_if(ev.begin(), ev.end(), [](const auto& e) { return e.exactly_real; }) == 0);
  CHECK(std::abs(ev[0].value - Complex(0, 1)) < 1e-14);
  CHECK(std::abs(ev[1].value - Complex(0, -1)) < 1e-14);

  RealMatrix d = RealMatrix::Zero(2, 2);
  d.diagonal() << 2, 3;
  ev = eig_real_schur(d);
  CHECK(std::all_of(ev.begin(), ev.end(), [](const auto& e) { return e.exactly_real && e.value.imag() == 0.0; }));

  // real count has the parity of the dimension; pairs are exact conjugates
  Rng rng(11);
  for (Index n : {49, 50}) {
    RealMatrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    ev = eig_real_schur(g);
    std::size_t real = 0;
    for (std::size_t k = 0; k < ev.size(); ++k) {
      if (ev[k].exactly_real) {
        ++real;
        continue;
      }
      REQUIRE(k + 1 < ev.size());
      CHECK(ev[k].value.imag() > 0.0);
      CHECK(ev[k + 1].value == std::conj(ev[k].value));
      ++k;
    }
    CHECK(real % 2 == static_cast<std::size_t>(n % 2));
    // agrees with the complex solver
    std::vector<Complex> a, b = eig_general(g.cast<Complex>());
    for (const auto& e : ev) a.push_back(e.value);
    CHECK(spectrum_distance(a, b) < 1e-9);
  }
}

TEST_CASE("trace norm") {
  RealMatrix d = RealMatrix::Zero(2, 2);
  d.diagonal() << 1, -1;
  CHECK(trace_norm(d.cast<Complex>()) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(trace_norm(ComplexMatrix::Zero(3, 3)) == 0.0);

  // |0><0| - |1><1|
  ComplexVector e0 = ComplexVector::Zero(2), e1 = ComplexVector::Zero(2);
  e0(0) = 1;
  e1(1) = 1;
  CHECK(trace_norm(ComplexMatrix(e0 * e0.adjoint() - e1 * e1.adjoint())) == doctest::Approx(2.0));

  // unitary invariance
  Rng rng(3);
  const ComplexMatrix x = test::random_state(6, rng) - test::random_state(6, rng);
  const ComplexMatrix u = haar_unitary(6, rng);
  CHECK(trace_norm(u * x * u.adjoint()) == doctest::Approx(trace_norm(x)).epsilon(1e-12));
  CHECK(trace_norm(x) <= 2.0 + 1e-12);

  ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(trace_norm(skew), PreconditionError);
}

TEST_CASE("density matrix validation") {
  CHECK(DensityMatrix::maximally_mixed(3).matrix().trace().real() == doctest::Approx(1.0));
  ComplexVector psi(2);
  psi << 1, Complex(0, 1);
  CHECK_THROWS_AS(DensityMatrix::pure(psi), PreconditionError);
  psi /= std::sqrt(2.0);
  CHECK(DensityMatrix::pure(psi).matrix().trace().real() == doctest::Approx(1.0));

  ComplexMatrix not_unit = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{not_unit}, PreconditionError);
  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative.diagonal() << 1.5, -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, PreconditionError);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{skew}, PreconditionError);

  const auto defects = state_defects(negative);
  CHECK(defects.min_eigenvalue == doctest::Approx(-0.5));
}

TEST_CASE("spectrum distance matches multisets") {
  CHECK(spectrum_distance({1.0, 2.0, 3.0}, {3.0, 1.0, 2.0}) == 0.0);
  CHECK(spectrum_distance({1.0, 1.0}, {1.0, 1.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(spectrum_distance({1.0}, {1.0, 2.0}), DimensionError);
}
