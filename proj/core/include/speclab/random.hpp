#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include "speclab/matrix.hpp"

namespace speclab {

/// xoshiro256** bit generator seeded through splitmix64.
///
/// A generator is identified by (seed, stream): the same pair always yields
/// the same sequence, and distinct streams are decorrelated, so Monte-Carlo
/// sample k can own stream k regardless of which thread runs it.
class Rng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view algorithm = "xoshiro256**/splitmix64";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal variate.
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q.
ComplexMatrix haar_unitary(Index n, Rng& rng);

/// First `cols` columns of a Haar unitary of size `rows` (thin QR with the
/// same phase fix). Distributed like any `cols` columns of haar_unitary(rows).
ComplexMatrix haar_isometry(Index rows, Index cols, Rng& rng);

/// Unit vector drawn from the unitarily invariant measure.
ComplexVector random_pure_state(Index n, Rng& rng);

}  // namespace speclab
