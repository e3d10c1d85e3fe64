#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace speclab {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Unitary discrete Fourier matrix, entry (j,k) = exp(-2 pi i j k / n) / sqrt(n).
ComplexMatrix dft_matrix(Index n);

/// Cyclic permutation S with S e_k = e_{(k + power) mod n}. Negative powers
/// rotate the other way; S^n = I.
ComplexMatrix cyclic_shift(Index n, std::int64_t power = 1);

/// Largest entry modulus, the norm used by all tolerance checks here.
double max_abs(const ComplexMatrix& a);
double max_abs(const RealMatrix& a);

bool all_finite(const ComplexMatrix& a);
bool all_finite(const RealMatrix& a);

/// Distance of U^dagger U from the identity in the max-entry norm.
double unitarity_defect(const ComplexMatrix& u);

/// Eigenvalues of a general complex matrix (complex Schur / QR iteration).
/// Throws ConvergenceError on failure.
std::vector<Complex> eig_general(const ComplexMatrix& a);

/// An eigenvalue read off a real Schur form. `exactly_real` comes from the
/// block structure (1x1 block) and needs no threshold.
struct SchurEigenvalue {
  Complex value;
  bool exactly_real = false;
};

/// Eigenvalues of a real matrix via its real Schur form. Complex values come
/// as adjacent conjugate pairs (positive imaginary part first).
std::vector<SchurEigenvalue> eig_real_schur(const RealMatrix& a);

/// Sum of |eigenvalues| of (A + A^dagger)/2. Rejects inputs whose
/// anti-Hermitian part exceeds 1e-8.
double trace_norm(const ComplexMatrix& a);

/// Largest distance between matched eigenvalues of two multisets of equal
/// size. Matching is greedy nearest-neighbour; with solver-level errors this
/// coincides with the optimal bottleneck matching.
double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b);

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Validates with the given tolerance; throws PreconditionError otherwise.
  explicit DensityMatrix(ComplexMatrix rho, double tol = 1e-10);

  /// Projector |psi><psi| for a unit vector psi.
  static DensityMatrix pure(const ComplexVector& psi);
  /// I/n.
  static DensityMatrix maximally_mixed(Index n);

  Index dim() const noexcept { return rho_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return rho_; }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix rho, Unchecked) : rho_(std::move(rho)) {}

  ComplexMatrix rho_;
};

/// Residuals of the three density-matrix conditions.
struct StateDefects {
  double hermiticity = 0.0;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
};
StateDefects state_defects(const ComplexMatrix& rho);

}  // namespace speclab
