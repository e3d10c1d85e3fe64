#include "speclab/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t a = seed;
  std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t x = splitmix64(a) ^ rotl(splitmix64(b), 17);
  for (auto& word : s_) word = splitmix64(x);
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(*this); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

ComplexMatrix haar_isometry(Index rows, Index cols, Rng& rng) {
  if (rows < 1 || cols < 1 || cols > rows) {
    throw PreconditionError("haar_isometry: need 1 <= cols <= rows");
  }
  ComplexMatrix z(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) z(i, j) = rng.complex_normal();

  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexMatrix haar_unitary(Index n, Rng& rng) { return haar_isometry(n, n, rng); }

ComplexVector random_pure_state(Index n, Rng& rng) {
  if (n < 1) throw PreconditionError("random_pure_state: dimension must be positive");
  ComplexVector psi(n);
  for (Index i = 0; i < n; ++i) psi(i) = rng.complex_normal();
  return psi / psi.norm();
}

}  // namespace speclab
