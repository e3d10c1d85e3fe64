#include "speclab/baker.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Returns round(value) when value is an integer within 1e-9, throws otherwise.
std::int64_t require_integer(double value, const char* what) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9 * std::max(1.0, std::abs(value))) {
    std::ostringstream os;
    os << what << " must be integer (got " << value << ")";
    throw PreconditionError(os.str());
  }
  return static_cast<std::int64_t>(rounded);
}

ComplexMatrix block_projector(Index N, Index M, Index m) {
  const Index width = N / M;
  ComplexMatrix p = ComplexMatrix::Zero(N, N);
  for (Index i = m * width; i < (m + 1) * width; ++i) p(i, i) = 1.0;
  return p;
}

}  // namespace

std::string_view to_string(ShiftMode mode) {
  switch (mode) {
    case ShiftMode::none: return "none";
    case ShiftMode::top: return "top";
    case ShiftMode::both: return "both";
  }
  return "none";
}

ShiftMode parse_shift_mode(std::string_view text) {
  if (text == "none") return ShiftMode::none;
  if (text == "top") return ShiftMode::top;
  if (text == "both") return ShiftMode::both;
  throw PreconditionError("shift_mode must be one of none, top, both (got '" + std::string(text) + "')");
}

void BakerParams::validate() const {
  if (N < 2 || N % 2 != 0) throw PreconditionError("N must be even and at least 2");
  if (K < 2) throw PreconditionError("K must be at least 2");
  if (N % K != 0) throw PreconditionError("K must divide N");
  if (L < 1) throw PreconditionError("L must be at least 1");
  if (M < 1) throw PreconditionError("M must be at least 1");
  if (N % M != 0) throw PreconditionError("M must divide N");
  if (!(delta >= 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in [0, 1]");
  if (M == 2) {
    const double n = static_cast<double>(N);
    if (shift == ShiftMode::top) require_integer(n * delta / 2.0, "N*delta/2");
    if (shift == ShiftMode::both) require_integer(n * delta / 4.0, "N*delta/4");
  }
}

ComplexMatrix baker_unitary(Index N, Index K) {
  if (K < 2) throw PreconditionError("baker_unitary: K must be at least 2");
  if (N < K || N % K != 0) throw PreconditionError("baker_unitary: K must divide N");
  const Index lower = N / K;
  ComplexMatrix blocks = ComplexMatrix::Zero(N, N);
  blocks.topLeftCorner(lower, lower) = dft_matrix(lower);
  blocks.bottomRightCorner(N - lower, N - lower) = dft_matrix(N - lower);
  return dft_matrix(N).adjoint() * blocks;
}

double classical_shift_map(double x, int K) {
  if (K < 2) throw PreconditionError("classical_shift_map: K must be at least 2");
  if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("classical_shift_map: x must lie in [0, 1]");
  const double k = K;
  if (x <= (k - 1.0) / k) return k * x / (k - 1.0);
  return k * x - k + 1.0;
}

double classical_entropy(double K) {
  if (!(K >= 2.0)) throw PreconditionError("classical_entropy: K must be at least 2");
  return std::log(K) / K + (K - 1.0) / K * std::log(K / (K - 1.0));
}

ComplexMatrix momentum_shift(Index N, std::int64_t power) {
  const ComplexMatrix f = dft_matrix(N);
  return f.adjoint() * cyclic_shift(N, power) * f;
}

KrausSet measurement_kraus(Index N, Index M, double delta, ShiftMode mode) {
  if (N < 1 || M < 1 || N % M != 0) throw PreconditionError("measurement_kraus: M must divide N");
  if (!(delta >= 0.0 && delta <= 1.0)) throw PreconditionError("measurement_kraus: delta must lie in [0, 1]");

  const ComplexMatrix f = dft_matrix(N);
  const ComplexMatrix fh = f.adjoint();
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(M));
  for (Index m = 0; m < M; ++m) ops.push_back(fh * block_projector(N, M, m) * f);

  if (M == 2 && mode != ShiftMode::none) {
    const double n = static_cast<double>(N);
    if (mode == ShiftMode::top) {
      const auto half = require_integer(n * delta / 2.0, "N*delta/2");
      ops[1] = momentum_shift(N, -half) * ops[1];
    } else {
      const auto quarter = require_integer(n * delta / 4.0, "N*delta/4");
      ops[0] = momentum_shift(N, quarter) * ops[0];
      ops[1] = momentum_shift(N, -quarter) * ops[1];
    }
  } else if (M > 2 && mode != ShiftMode::none && delta != 0.0) {
    spdlog::warn("measurement_kraus: shifts are only defined for M = 2; using unshifted projectors for M = {}", M);
  }
  return KrausSet(std::move(ops));
}

KrausSet sloppy_baker_channel(const BakerParams& params) {
  params.validate();
  const ComplexMatrix b = baker_unitary(params.N, params.K);
  ComplexMatrix evolution = b;
  for (int step = 1; step < params.L; ++step) evolution = b * evolution;
  const double defect = unitarity_defect(evolution);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "sloppy_baker_channel: (B_K)^L lost unitarity (defect " << defect << ")";
    throw Error(os.str());
  }

  const KrausSet projectors = measurement_kraus(params.N, params.M, params.delta, params.shift);
  std::vector<ComplexMatrix> ops;
  ops.reserve(projectors.size());
  for (const auto& d : projectors.operators()) ops.push_back(d * evolution);
  return KrausSet(std::move(ops));
}

}  // namespace speclab
