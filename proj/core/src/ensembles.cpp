#include "speclab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "speclab/errors.hpp"

namespace speclab {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::environmental: return "environmental";
    case EnsembleKind::external_fields: return "external_fields";
    case EnsembleKind::projected_unitary: return "projected_unitary";
    case EnsembleKind::real_ginibre: return "real_ginibre";
  }
  return "environmental";
}

EnsembleKind parse_ensemble_kind(std::string_view text) {
  if (text == "environmental") return EnsembleKind::environmental;
  if (text == "external_fields") return EnsembleKind::external_fields;
  if (text == "projected_unitary") return EnsembleKind::projected_unitary;
  if (text == "real_ginibre") return EnsembleKind::real_ginibre;
  throw PreconditionError("unknown ensemble '" + std::string(text) + "'");
}

KrausSet environmental_channel(Index N, Index M, Rng& rng) {
  if (N < 2) throw PreconditionError("environmental_channel: N must be at least 2");
  if (M < 1) throw PreconditionError("environmental_channel: M must be at least 1");
  // Only the columns (s', environment 0) of the global unitary are ever used.
  const ComplexMatrix w = haar_isometry(N * M, N, rng);
  std::vector<ComplexMatrix> ops(static_cast<std::size_t>(M), ComplexMatrix(N, N));
  for (Index m = 0; m < M; ++m) {
    ComplexMatrix& a = ops[static_cast<std::size_t>(m)];
    for (Index s = 0; s < N; ++s) a.row(s) = w.row(s * M + m);
  }
  return KrausSet(std::move(ops));
}

KrausSet random_external_fields(Index N, std::span<const double> p, Rng& rng) {
  if (N < 1) throw PreconditionError("random_external_fields: N must be positive");
  if (p.empty()) throw PreconditionError("random_external_fields: probability vector is empty");
  for (double pm : p) {
    if (!(pm >= 0.0) || !std::isfinite(pm)) {
      throw PreconditionError("random_external_fields: probabilities must be nonnegative");
    }
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("random_external_fields: probabilities must sum to 1");

  std::vector<ComplexMatrix> ops;
  ops.reserve(p.size());
  for (double pm : p) ops.push_back(std::sqrt(pm) * haar_unitary(N, rng));
  return KrausSet(std::move(ops));
}

KrausSet random_external_fields(Index N, Index M, Rng& rng) {
  if (M < 1) throw PreconditionError("random_external_fields: M must be at least 1");
  const std::vector<double> p(static_cast<std::size_t>(M), 1.0 / static_cast<double>(M));
  return random_external_fields(N, p, rng);
}

KrausSet projected_unitary_channel(Index N, Index M, Rng& rng) {
  if (N < 1 || M < 1 || N % M != 0) throw PreconditionError("projected_unitary_channel: M must divide N");
  const ComplexMatrix u = haar_unitary(N, rng);
  const Index width = N / M;
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(M));
  for (Index m = 0; m < M; ++m) {
    ComplexMatrix a = ComplexMatrix::Zero(N, N);
    a.middleRows(m * width, width) = u.middleRows(m * width, width);
    ops.push_back(std::move(a));
  }
  return KrausSet(std::move(ops));
}

RealMatrix real_ginibre(Index n, Rng& rng) {
  if (n < 1) throw PreconditionError("real_ginibre: n must be positive");
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  RealMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = sigma * rng.normal();
  return g;
}

double phi_first_moment(Index N, Index i, Index j, Index k, Index l) {
  return (i == j && k == l) ? 1.0 / static_cast<double>(N) : 0.0;
}

double phi_second_moment(Index N, Index M, Index i, Index j, Index k, Index l, Index ib, Index jb, Index kb,
                         Index lb) {
  const double d = static_cast<double>(N * M);
  const double m = static_cast<double>(M);
  const auto delta = [](Index a, Index b) { return a == b ? 1.0 : 0.0; };
  const double same_pairs = delta(i, j) * delta(ib, jb);
  const double same_rows = delta(i, ib) * delta(j, jb);
  const double wg_identity =
      m * m * same_pairs * delta(k, l) * delta(kb, lb) + m * same_rows * delta(k, kb) * delta(l, lb);
  const double wg_swap =
      m * m * same_pairs * delta(k, kb) * delta(l, lb) + m * same_rows * delta(k, l) * delta(kb, lb);
  return (wg_identity - wg_swap / d) / (d * d - 1.0);
}

namespace {

double standardized(double sum, double sum_sq, double exact, std::size_t n) {
  const double count = static_cast<double>(n);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
  const double se = std::sqrt(var / count);
  const double diff = std::abs(mean - exact);
  if (se < 1e-14) return diff < 1e-10 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace

MomentReport phi_moment_check(Index N, Index M, std::size_t samples, std::uint64_t seed,
                              std::uint64_t first_stream) {
  if (samples < 100) throw PreconditionError("phi_moment_check: need at least 100 samples");
  MomentReport report;
  report.N = N;
  report.M = M;
  report.samples = samples;
  report.second_moments_checked = N <= 4;
  report.offdiagonal_variance_predicted = 1.0 / static_cast<double>(N * N * M);

  const Index d = N * N * N * N;
  ComplexVector first_sum = ComplexVector::Zero(d);
  RealVector first_sq_re = RealVector::Zero(d);
  RealVector first_sq_im = RealVector::Zero(d);
  ComplexMatrix second_sum;
  RealMatrix second_sq_re;
  RealMatrix second_sq_im;
  if (report.second_moments_checked) {
    second_sum = ComplexMatrix::Zero(d, d);
    second_sq_re = RealMatrix::Zero(d, d);
    second_sq_im = RealMatrix::Zero(d, d);
  }
  double offdiag_sum = 0.0;
  std::size_t offdiag_count = 0;

  // x(idx(i,j,k,l)) = Phi_{ij,kl} = S(i*N + j, k*N + l).
  const auto idx = [N](Index i, Index j, Index k, Index l) { return ((i * N + j) * N + k) * N + l; };
  ComplexVector x(d);
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(seed, first_stream + s);
    const Superoperator phi = superoperator_from_kraus(environmental_channel(N, M, rng));
    const ComplexMatrix& sm = phi.matrix();
    for (Index i = 0; i < N; ++i)
      for (Index j = 0; j < N; ++j)
        for (Index k = 0; k < N; ++k)
          for (Index l = 0; l < N; ++l) {
            const Complex v = sm(i * N + j, k * N + l);
            x(idx(i, j, k, l)) = v;
            report.symmetry_residual =
                std::max(report.symmetry_residual, std::abs(v - std::conj(sm(j * N + i, l * N + k))));
            if (i != j && k != l) {
              offdiag_sum += std::norm(v);
              ++offdiag_count;
            }
          }
    first_sum += x;
    first_sq_re += x.real().cwiseAbs2();
    first_sq_im += x.imag().cwiseAbs2();
    if (report.second_moments_checked) {
      const ComplexMatrix outer = x * x.adjoint();
      second_sum += outer;
      second_sq_re += outer.real().cwiseAbs2();
      second_sq_im += outer.imag().cwiseAbs2();
    }
  }

  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j)
      for (Index k = 0; k < N; ++k)
        for (Index l = 0; l < N; ++l) {
          const Index a = idx(i, j, k, l);
          const double exact = phi_first_moment(N, i, j, k, l);
          report.max_first_deviation = std::max(
              {report.max_first_deviation, standardized(first_sum(a).real(), first_sq_re(a), exact, samples),
               standardized(first_sum(a).imag(), first_sq_im(a), 0.0, samples)});
          if (!report.second_moments_checked) continue;
          for (Index ib = 0; ib < N; ++ib)
            for (Index jb = 0; jb < N; ++jb)
              for (Index kb = 0; kb < N; ++kb)
                for (Index lb = 0; lb < N; ++lb) {
                  const Index b = idx(ib, jb, kb, lb);
                  const double exact2 = phi_second_moment(N, M, i, j, k, l, ib, jb, kb, lb);
                  report.max_second_deviation =
                      std::max({report.max_second_deviation,
                                standardized(second_sum(a, b).real(), second_sq_re(a, b), exact2, samples),
                                standardized(second_sum(a, b).imag(), second_sq_im(a, b), 0.0, samples)});
                }
        }
  report.offdiagonal_variance = offdiag_count ? offdiag_sum / static_cast<double>(offdiag_count) : 0.0;
  return report;
}

}  // namespace speclab
