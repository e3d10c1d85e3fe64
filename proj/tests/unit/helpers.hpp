#pragma once

#include <cmath>
#include <vector>

#include "speclab/matrix.hpp"
#include "speclab/random.hpp"

namespace test {

// Random (not necessarily normalised) mixed state of rank n.
inline speclab::ComplexMatrix random_state(speclab::Index n, speclab::Rng& rng) {
  speclab::ComplexMatrix g(n, n);
  for (speclab::Index i = 0; i < n; ++i)
    for (speclab::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  speclab::ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace test
