#pragma once

#include <string_view>

#include "speclab/channels.hpp"
#include "speclab/matrix.hpp"

namespace speclab {

/// Which Kraus projectors carry a momentum shift.
enum class ShiftMode {
  none,  ///< plain projective measurement
  top,   ///< upper half shifted down by Delta/2 (sloppy baker)
  both,  ///< both halves shifted by Delta/4 towards the centre (double sloppy)
};

std::string_view to_string(ShiftMode mode);
ShiftMode parse_shift_mode(std::string_view text);

/// Parameters of the measured, possibly sloppy, asymmetric baker channel.
struct BakerParams {
  Index N = 2;
  Index K = 2;
  int L = 1;
  Index M = 2;
  double delta = 0.0;
  ShiftMode shift = ShiftMode::top;

  /// Throws PreconditionError naming the first violated constraint.
  void validate() const;
};

/// B_K = F_N^dagger diag(F_{N/K}, F_{N - N/K}). K = 2 is the Balazs-Voros map.
ComplexMatrix baker_unitary(Index N, Index K);

/// Classical asymmetric shift map f_K on [0, 1].
double classical_shift_map(double x, int K);

/// Kolmogorov-Sinai entropy of f_K in nats.
double classical_entropy(double K);

/// Momentum translation V = F^dagger S F, raised to `power`.
ComplexMatrix momentum_shift(Index N, std::int64_t power);

/// Measurement Kraus operators D_m: Fourier-conjugated projectors onto M
/// contiguous blocks, with the momentum shifts of `mode` when M = 2.
KrausSet measurement_kraus(Index N, Index M, double delta, ShiftMode mode);

/// Kraus set {D_m (B_K)^L}.
KrausSet sloppy_baker_channel(const BakerParams& params);

}  // namespace speclab
