#pragma once

#include <cstdint>
#include <vector>

#include "speclab/channels.hpp"
#include "speclab/random.hpp"

namespace speclab {

/// Mean trace distance Tr|Phi^t(rho_0) - omega| (no factor 1/2) of random
/// pure initial states to the invariant state, for t = 0..steps.
struct DecayTrajectory {
  std::vector<double> mean_distance;
  std::vector<std::vector<double>> per_state;  ///< [state][t]
  std::size_t states = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double subleading_modulus = 0.0;  ///< |z_2| found while computing omega
};

/// Initial states are drawn from `rng` in order; iteration uses the Kraus
/// route. Throws DegenerateSpectrumError when omega is not unique.
DecayTrajectory distance_trajectory(const KrausSet& kraus, int steps, int states, Rng& rng);

/// Least-squares fit of ln d(t) = c - alpha t over t in [fit_start, t_floor),
/// t_floor being the first step with d(t) <= floor.
struct DecayFit {
  double alpha = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int first = 0;
  int last = 0;  ///< inclusive
  std::size_t points = 0;
};

DecayFit fit_decay_rate(const DecayTrajectory& trajectory, double floor = 1e-12, int fit_start = 1);
DecayFit fit_decay_rate(const std::vector<double>& distances, double floor = 1e-12, int fit_start = 1);

}  // namespace speclab
