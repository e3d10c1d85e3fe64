#include "speclab/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

DecayTrajectory distance_trajectory(const KrausSet& kraus, int steps, int states, Rng& rng) {
  if (steps < 1) throw PreconditionError("distance_trajectory: steps must be at least 1");
  if (states < 1) throw PreconditionError("distance_trajectory: need at least one initial state");

  const Superoperator s = superoperator_from_kraus(kraus);
  const InvariantState omega = invariant_state(s);

  DecayTrajectory traj;
  traj.states = static_cast<std::size_t>(states);
  traj.seed = rng.seed();
  traj.stream = rng.stream();
  traj.subleading_modulus = omega.subleading_modulus;
  traj.per_state.assign(traj.states, std::vector<double>(static_cast<std::size_t>(steps) + 1, 0.0));

  const Index n = kraus.dim();
  for (std::size_t k = 0; k < traj.states; ++k) {
    const ComplexVector psi = random_pure_state(n, rng);
    ComplexMatrix rho = psi * psi.adjoint();
    auto& d = traj.per_state[k];
    d[0] = trace_norm(ComplexMatrix(rho - omega.state));
    for (int t = 1; t <= steps; ++t) {
      rho = apply_channel(kraus, rho);
      rho = 0.5 * (rho + rho.adjoint());
      d[static_cast<std::size_t>(t)] = trace_norm(ComplexMatrix(rho - omega.state));
    }
  }

  traj.mean_distance.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  for (const auto& d : traj.per_state)
    for (std::size_t t = 0; t < d.size(); ++t) traj.mean_distance[t] += d[t];
  for (double& v : traj.mean_distance) v /= static_cast<double>(traj.states);
  return traj;
}

DecayFit fit_decay_rate(const std::vector<double>& distances, double floor, int fit_start) {
  if (fit_start < 0) throw PreconditionError("fit_decay_rate: fit_start must be nonnegative");
  DecayFit fit;
  fit.first = fit_start;
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t t = static_cast<std::size_t>(fit_start); t < distances.size(); ++t) {
    if (!(distances[t] > floor)) break;
    ts.push_back(static_cast<double>(t));
    ys.push_back(std::log(distances[t]));
  }
  if (ts.size() < 3) {
    std::ostringstream os;
    os << "fit_decay_rate: only " << ts.size() << " points above the floor " << floor;
    throw PreconditionError(os.str());
  }
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sty / stt;
  fit.alpha = -slope;
  fit.intercept = my - slope * mt;
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  fit.points = ts.size();
  fit.last = fit.first + static_cast<int>(ts.size()) - 1;
  return fit;
}

DecayFit fit_decay_rate(const DecayTrajectory& trajectory, double floor, int fit_start) {
  return fit_decay_rate(trajectory.mean_distance, floor, fit_start);
}

}  // namespace speclab
