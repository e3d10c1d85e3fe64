#pragma once

#include <vector>

#include "speclab/matrix.hpp"

namespace speclab {

// Vectorization convention used throughout: row-major,
//   vec(rho)[i * N + j] = rho(i, j),
// so that the superoperator is sum_m A_m (x) conj(A_m) with elements
//   Phi(i*N + j, k*N + l) = sum_m A_m(i, k) * conj(A_m(j, l)).

/// Ordered list of M >= 1 Kraus operators, all N x N.
class KrausSet {
 public:
  explicit KrausSet(std::vector<ComplexMatrix> operators);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<ComplexMatrix>& operators() const noexcept { return ops_; }
  const ComplexMatrix& operator[](std::size_t m) const { return ops_.at(m); }

 private:
  Index dim_ = 0;
  std::vector<ComplexMatrix> ops_;
};

/// N^2 x N^2 matrix of a linear map on N x N matrices (row-major vec).
class Superoperator {
 public:
  explicit Superoperator(ComplexMatrix matrix);

  Index system_dim() const noexcept { return n_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  Index n_ = 0;
  ComplexMatrix m_;
};

/// Unit-trace Choi matrix D = (1/N) sum_ij Phi(|i><j|) (x) |i><j|.
class ChoiMatrix {
 public:
  ChoiMatrix(Index system_dim, ComplexMatrix matrix) : n_(system_dim), m_(std::move(matrix)) {}

  Index system_dim() const noexcept { return n_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  Index n_;
  ComplexMatrix m_;
};

/// Real (generalised Bloch) representation of a Hermiticity-preserving map,
///   full = [[1, 0], [kappa, C]]
/// in the orthonormal basis lambda^0 = I/sqrt(N), lambda^1.. generalised
/// Gell-Mann matrices with Tr(lambda^i lambda^j) = delta_ij.
struct BlochForm {
  Index system_dim = 0;
  RealVector kappa;        ///< length N^2 - 1
  RealMatrix contraction;  ///< C, size N^2 - 1
  RealMatrix full;         ///< size N^2
};

struct TraceCheck {
  bool ok = false;
  double residual = 0.0;  ///< max |sum A^dagger A - I|
};

struct PositivityCheck {
  bool ok = false;
  double min_eigenvalue = 0.0;  ///< of the unit-trace Choi matrix
};

struct InvariantState {
  ComplexMatrix state;  ///< Hermitian, unit trace
  double residual = 0.0;  ///< max |Phi(omega) - omega|
  double subleading_modulus = 0.0;
};

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, Index n);

Superoperator superoperator_from_kraus(const KrausSet& kraus);

/// Phi(rho) = sum_m A_m rho A_m^dagger.
ComplexMatrix apply_channel(const KrausSet& kraus, const ComplexMatrix& rho);
DensityMatrix apply_channel(const KrausSet& kraus, const DensityMatrix& rho);

/// Same map evaluated through the superoperator matrix.
ComplexMatrix apply_superoperator(const Superoperator& s, const ComplexMatrix& rho);

TraceCheck is_trace_preserving(const KrausSet& kraus, double tol = 1e-10);

ChoiMatrix choi_matrix(const Superoperator& s);
/// Inverse of the Choi reshuffle.
Superoperator superoperator_from_choi(const ChoiMatrix& choi);

PositivityCheck is_completely_positive(const Superoperator& s, double tol = 1e-10);

/// Orthonormal Hermitian basis {lambda^i}, i = 0..N^2-1. Built once per N;
/// the returned reference stays valid for the process lifetime.
const std::vector<ComplexMatrix>& generator_basis(Index n);

/// Throws PreconditionError when the transformed matrix has imaginary
/// residue above 1e-8 (the map is not Hermiticity preserving).
BlochForm bloch_form(const Superoperator& s);

/// Fixed point omega = Phi(omega). Requires |z_2| < 1 - 1e-6, otherwise
/// throws DegenerateSpectrumError.
InvariantState invariant_state(const Superoperator& s);
InvariantState invariant_state(const BlochForm& bloch, const Superoperator& s);

}  // namespace speclab
