#pragma once

#include <span>
#include <string_view>

#include "speclab/channels.hpp"
#include "speclab/random.hpp"

namespace speclab {

enum class EnsembleKind { environmental, external_fields, projected_unitary, real_ginibre };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view text);

/// Partial trace of a Haar-random coupling to an M-dimensional environment
/// prepared in its first basis state. Ordering is system (x) environment,
/// so A_m(s, s') = U(s*M + m, s'*M).
KrausSet environmental_channel(Index N, Index M, Rng& rng);

/// Convex mixture sum_m p_m U_m rho U_m^dagger of independent Haar unitaries.
KrausSet random_external_fields(Index N, std::span<const double> p, Rng& rng);
/// Uniform weights p_m = 1/M.
KrausSet random_external_fields(Index N, Index M, Rng& rng);

/// Kraus operators P_m U with P_m the projector on the m-th block of N/M
/// computational basis vectors and U a single Haar unitary.
KrausSet projected_unitary_channel(Index N, Index M, Rng& rng);

/// n x n matrix with iid N(0, 1/n) entries; the spectrum fills the unit disk.
RealMatrix real_ginibre(Index n, Rng& rng);

/// Exact mean of Phi_{ij,kl} over the environmental ensemble.
double phi_first_moment(Index N, Index i, Index j, Index k, Index l);

/// Exact <Phi_{ij,kl} conj(Phi_{ib jb, kb lb})> over the environmental ensemble.
double phi_second_moment(Index N, Index M, Index i, Index j, Index k, Index l, Index ib, Index jb, Index kb,
                         Index lb);

/// Monte-Carlo check of the environmental-ensemble moment formulas.
struct MomentReport {
  Index N = 0;
  Index M = 0;
  std::size_t samples = 0;
  /// max |estimate - exact| / standard error over all elements (re and im).
  double max_first_deviation = 0.0;
  /// Same for all second moments; only computed for N <= 4.
  double max_second_deviation = 0.0;
  bool second_moments_checked = false;
  /// max over samples of |Phi_{ij,kl} - conj(Phi_{ji,lk})|.
  double symmetry_residual = 0.0;
  /// Mean |Phi_{ij,kl}|^2 over elements with i != j and k != l.
  double offdiagonal_variance = 0.0;
  /// Large-N prediction 1 / (N^2 M).
  double offdiagonal_variance_predicted = 0.0;
};

/// Each sample draws its channel from Rng(seed, first_stream + s).
MomentReport phi_moment_check(Index N, Index M, std::size_t samples, std::uint64_t seed,
                              std::uint64_t first_stream = 0);

}  // namespace speclab
