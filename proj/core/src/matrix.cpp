#include "speclab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Dimension, Frobenius norm and an FNV-1a hash of the raw entries, enough to
// recognise a failing input again.
template <typename Derived>
std::string fingerprint(const Eigen::MatrixBase<Derived>& a) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(a.derived().data());
  const std::size_t size = static_cast<std::size_t>(a.size()) * sizeof(typename Derived::Scalar);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << a.rows() << "x" << a.cols() << " |A|_F=" << a.norm() << " fnv=" << std::hex << h;
  return os.str();
}

}  // namespace

ComplexMatrix dft_matrix(Index n) {
  if (n < 1) throw PreconditionError("dft_matrix: dimension must be positive");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      // Reduce j*k mod n first so the phase stays accurate for large n.
      const auto jk = static_cast<double>((j * k) % n);
      const double phase = -2.0 * std::numbers::pi * jk / static_cast<double>(n);
      f(j, k) = std::polar(scale, phase);
    }
  }
  return f;
}

ComplexMatrix cyclic_shift(Index n, std::int64_t power) {
  if (n < 1) throw PreconditionError("cyclic_shift: dimension must be positive");
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  const std::int64_t shift = ((power % n) + n) % n;
  for (Index k = 0; k < n; ++k) s((k + shift) % n, k) = 1.0;
  return s;
}

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const RealMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }
bool all_finite(const RealMatrix& a) { return a.allFinite(); }

double unitarity_defect(const ComplexMatrix& u) {
  return max_abs(ComplexMatrix(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())));
}

std::vector<Complex> eig_general(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eig_general: matrix must be square");
  if (!a.allFinite()) throw PreconditionError("eig_general: non-finite entries in " + fingerprint(a));
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_general: complex Schur iteration did not converge for " + fingerprint(a));
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

std::vector<SchurEigenvalue> eig_real_schur(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eig_real_schur: matrix must be square");
  if (!a.allFinite()) throw PreconditionError("eig_real_schur: non-finite entries in " + fingerprint(a));
  const Index n = a.rows();
  std::vector<SchurEigenvalue> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 0) return out;

  Eigen::RealSchur<RealMatrix> schur(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("eig_real_schur: real Schur iteration did not converge for " + fingerprint(a));
  }
  const RealMatrix& t = schur.matrixT();

  // Eigen's RealSchur splits every 2x2 block with real eigenvalues, so a
  // surviving nonzero subdiagonal entry marks a genuine conjugate pair.
  Index i = 0;
  while (i < n) {
    if (i == n - 1 || t(i + 1, i) == 0.0) {
      out.push_back({Complex(t(i, i), 0.0), true});
      ++i;
      continue;
    }
    const double p = 0.5 * (t(i, i) - t(i + 1, i + 1));
    const double t0 = t(i + 1, i);
    const double t1 = t(i, i + 1);
    const double scale = std::max({std::abs(p), std::abs(t0), std::abs(t1)});
    const double ps = p / scale;
    const double z = scale * std::sqrt(std::abs(ps * ps + (t0 / scale) * (t1 / scale)));
    const double re = t(i + 1, i + 1) + p;
    out.push_back({Complex(re, z), false});
    out.push_back({Complex(re, -z), false});
    i += 2;
  }
  return out;
}

double trace_norm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace_norm: matrix must be square");
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  const double skew = max_abs(ComplexMatrix(a - herm));
  if (skew > 1e-8) {
    std::ostringstream os;
    os << "trace_norm: input is not Hermitian (anti-Hermitian part " << skew << ")";
    throw PreconditionError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("trace_norm: Hermitian eigensolver failed for " + fingerprint(herm));
  }
  return solver.eigenvalues().cwiseAbs().sum();
}

double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) throw DimensionError("spectrum_distance: multisets differ in size");
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& z : a) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - b[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

StateDefects state_defects(const ComplexMatrix& rho) {
  StateDefects d;
  d.hermiticity = max_abs(ComplexMatrix(rho - rho.adjoint()));
  d.trace = std::abs(rho.trace() - Complex(1.0, 0.0));
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = rho.size() == 0 ? 0.0 : solver.eigenvalues().minCoeff();
  return d;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw DimensionError("DensityMatrix: matrix must be square and non-empty");
  }
  if (!rho_.allFinite()) throw PreconditionError("DensityMatrix: non-finite entries");
  const StateDefects d = state_defects(rho_);
  if (d.hermiticity > tol || d.trace > tol || d.min_eigenvalue < -tol) {
    std::ostringstream os;
    os << "DensityMatrix: not a state (hermiticity " << d.hermiticity << ", trace defect " << d.trace
       << ", min eigenvalue " << d.min_eigenvalue << ")";
    throw PreconditionError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw PreconditionError("DensityMatrix::pure: vector is not normalized");
  return DensityMatrix(ComplexMatrix(psi * psi.adjoint()), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(Index n) {
  if (n < 1) throw PreconditionError("DensityMatrix::maximally_mixed: dimension must be positive");
  return DensityMatrix(ComplexMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n)), Unchecked{});
}

}  // namespace speclab
