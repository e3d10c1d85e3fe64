#include "speclab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

using SparseComplex = Eigen::SparseMatrix<Complex>;

struct BasisCache {
  std::vector<ComplexMatrix> basis;
  SparseComplex columns;  // column i = vec(lambda^i)
};

std::vector<ComplexMatrix> build_basis(Index n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  basis.push_back(ComplexMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  const double r = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.push_back(std::move(sym));
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = Complex(0.0, -r);
      anti(k, j) = Complex(0.0, r);
      basis.push_back(std::move(anti));
    }
  }
  for (Index l = 1; l < n; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(std::move(diag));
  }
  return basis;
}

const BasisCache& basis_cache(Index n) {
  static std::mutex mutex;
  static std::map<Index, std::unique_ptr<BasisCache>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto entry = std::make_unique<BasisCache>();
  entry->basis = build_basis(n);
  const Index d = n * n;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Index col = 0; col < d; ++col) {
    const ComplexMatrix& b = entry->basis[static_cast<std::size_t>(col)];
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (b(i, j) != Complex(0.0, 0.0)) triplets.emplace_back(i * n + j, col, b(i, j));
  }
  entry->columns.resize(d, d);
  entry->columns.setFromTriplets(triplets.begin(), triplets.end());
  entry->columns.makeCompressed();

  // Tr(lambda^i lambda^j) = vec(lambda^i)^dagger vec(lambda^j) for Hermitian lambda.
  const SparseComplex gram = entry->columns.adjoint() * entry->columns;
  SparseComplex identity(d, d);
  identity.setIdentity();
  const SparseComplex defect = gram - identity;
  for (Index k = 0; k < defect.outerSize(); ++k)
    for (SparseComplex::InnerIterator it(defect, k); it; ++it)
      if (std::abs(it.value()) > 1e-12) throw Error("generator_basis: basis is not orthonormal");
  return *cache.emplace(n, std::move(entry)).first->second;
}

Index sqrt_dim(Index d) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(d))));
  if (n * n != d) throw DimensionError("superoperator size is not a perfect square");
  return n;
}

}  // namespace

KrausSet::KrausSet(std::vector<ComplexMatrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw PreconditionError("KrausSet: need at least one operator");
  dim_ = ops_.front().rows();
  if (dim_ < 1) throw DimensionError("KrausSet: operators must be non-empty");
  for (const auto& a : ops_) {
    if (a.rows() != dim_ || a.cols() != dim_) {
      throw DimensionError("KrausSet: all operators must be square of the same size");
    }
    if (!a.allFinite()) throw PreconditionError("KrausSet: non-finite operator entries");
  }
}

Superoperator::Superoperator(ComplexMatrix matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols()) throw DimensionError("Superoperator: matrix must be square");
  n_ = sqrt_dim(m_.rows());
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const Index n = rho.rows();
  ComplexVector v(rho.size());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, Index n) {
  if (v.size() != n * n) throw DimensionError("unvectorize: length is not N^2");
  ComplexMatrix rho(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  return rho;
}

Superoperator superoperator_from_kraus(const KrausSet& kraus) {
  const Index n = kraus.dim();
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& a : kraus.operators()) {
    const ComplexMatrix ac = a.conjugate();
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0, 0.0)) continue;
        s.block(i * n, k * n, n, n).noalias() += aik * ac;
      }
  }
  return Superoperator(std::move(s));
}

ComplexMatrix apply_channel(const KrausSet& kraus, const ComplexMatrix& rho) {
  if (rho.rows() != kraus.dim() || rho.cols() != kraus.dim()) {
    throw DimensionError("apply_channel: state dimension does not match the channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  ComplexMatrix tmp(rho.rows(), rho.cols());
  for (const auto& a : kraus.operators()) {
    tmp.noalias() = a * rho;
    out.noalias() += tmp * a.adjoint();
  }
  return out;
}

DensityMatrix apply_channel(const KrausSet& kraus, const DensityMatrix& rho) {
  ComplexMatrix out = apply_channel(kraus, rho.matrix());
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out), 1e-8);
}

ComplexMatrix apply_superoperator(const Superoperator& s, const ComplexMatrix& rho) {
  if (rho.rows() != s.system_dim() || rho.cols() != s.system_dim()) {
    throw DimensionError("apply_superoperator: state dimension does not match");
  }
  return unvectorize(s.matrix() * vectorize(rho), s.system_dim());
}

TraceCheck is_trace_preserving(const KrausSet& kraus, double tol) {
  const Index n = kraus.dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& a : kraus.operators()) sum.noalias() += a.adjoint() * a;
  sum -= ComplexMatrix::Identity(n, n);
  const double residual = max_abs(sum);
  return {residual < tol, residual};
}

ChoiMatrix choi_matrix(const Superoperator& s) {
  const Index n = s.system_dim();
  const ComplexMatrix& m = s.matrix();
  ComplexMatrix d(n * n, n * n);
  const double scale = 1.0 / static_cast<double>(n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) d(a * n + i, b * n + j) = scale * m(a * n + b, i * n + j);
  return ChoiMatrix(n, std::move(d));
}

Superoperator superoperator_from_choi(const ChoiMatrix& choi) {
  const Index n = choi.system_dim();
  const ComplexMatrix& d = choi.matrix();
  if (d.rows() != n * n || d.cols() != n * n) throw DimensionError("superoperator_from_choi: bad Choi size");
  ComplexMatrix m(n * n, n * n);
  const double scale = static_cast<double>(n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(a * n + b, i * n + j) = scale * d(a * n + i, b * n + j);
  return Superoperator(std::move(m));
}

PositivityCheck is_completely_positive(const Superoperator& s, double tol) {
  const ChoiMatrix choi = choi_matrix(s);
  const ComplexMatrix herm = 0.5 * (choi.matrix() + choi.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("is_completely_positive: eigensolver failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig};
}

const std::vector<ComplexMatrix>& generator_basis(Index n) {
  if (n < 1) throw PreconditionError("generator_basis: dimension must be positive");
  return basis_cache(n).basis;
}

BlochForm bloch_form(const Superoperator& s) {
  const Index n = s.system_dim();
  const BasisCache& cache = basis_cache(n);
  const ComplexMatrix st = s.matrix() * cache.columns;
  const ComplexMatrix b = cache.columns.adjoint() * st;

  const double imag_residue = b.size() == 0 ? 0.0 : b.imag().cwiseAbs().maxCoeff();
  if (imag_residue > 1e-8) {
    std::ostringstream os;
    os << "bloch_form: map is not Hermiticity preserving (imaginary residue " << imag_residue << ")";
    throw PreconditionError(os.str());
  }

  BlochForm form;
  form.system_dim = n;
  form.full = b.real();
  const Index d = n * n;
  form.kappa = form.full.col(0).tail(d - 1);
  form.contraction = form.full.bottomRightCorner(d - 1, d - 1);
  return form;
}

InvariantState invariant_state(const Superoperator& s) { return invariant_state(bloch_form(s), s); }

InvariantState invariant_state(const BlochForm& bloch, const Superoperator& s) {
  const Index n = bloch.system_dim;
  const Index d = n * n;
  InvariantState result;

  double subleading = 0.0;
  for (const auto& e : eig_real_schur(bloch.contraction)) subleading = std::max(subleading, std::abs(e.value));
  result.subleading_modulus = subleading;
  if (subleading >= 1.0 - 1e-6) {
    std::ostringstream os;
    os << "invariant_state: degenerate leading eigenvalue (|z2| = " << subleading << ")";
    throw DegenerateSpectrumError(os.str());
  }

  // Bloch components of the fixed point: a_0 = 1/sqrt(N), (I - C) a = kappa a_0.
  const double a0 = 1.0 / std::sqrt(static_cast<double>(n));
  const RealMatrix system = RealMatrix::Identity(d - 1, d - 1) - bloch.contraction;
  const RealVector rest = system.partialPivLu().solve(bloch.kappa * a0);

  const auto& basis = generator_basis(n);
  ComplexMatrix omega = a0 * basis[0];
  for (Index i = 1; i < d; ++i) omega += rest(i - 1) * basis[static_cast<std::size_t>(i)];
  omega = 0.5 * (omega + omega.adjoint());
  omega /= omega.trace();

  result.residual = max_abs(ComplexMatrix(apply_superoperator(s, omega) - omega));
  result.state = std::move(omega);
  return result;
}

}  // namespace speclab
