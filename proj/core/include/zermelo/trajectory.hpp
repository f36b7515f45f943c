#pragma once

#include <vector>

#include "zermelo/metric.hpp"

namespace zermelo {

/// Discrete trajectory produced by the forward state equations
///
///   x[s+1] = x[s] + v[s],        t[s+1] = t[s] + F(t[s], x[s], v[s]),
///
/// so that each control step takes exactly one unit of the metric's time
/// scale per unit of F.  t is strictly increasing.
struct DiscreteTrajectory {
  std::vector<double> t;  ///< size T+1
  std::vector<Vec2> x;    ///< size T+1
  std::vector<Vec2> v;    ///< size T

  int steps() const { return static_cast<int>(v.size()); }

  /// Structural checks: sizes, strictly increasing t, and the position
  /// chain x[s+1] = x[s] + v[s] (to 1e-12 relative, so that trajectories
  /// survive serialization round trips).  Throws std::invalid_argument.
  void validate() const;
};

/// Integrates the forward state equations from (A, t0) under `controls`.
/// Throws std::domain_error on a zero control vector.
DiscreteTrajectory rollout(const FinslerMetric& m, const Vec2& A, double t0,
                           const std::vector<Vec2>& controls);

/// t[T] − t[0].
double travel_time(const DiscreteTrajectory& traj);

/// Discrete action Σ_s (t[s+1] − t[s])²; equals Σ_s vᵀG v on rollouts
/// (the metric argument documents which G the identity refers to).
double energy(const FinslerMetric& m, const DiscreteTrajectory& traj);
double energy(const DiscreteTrajectory& traj);

/// Σ_s |v_s|² / F(t_s, x_s, v_s): the integral of the instantaneous
/// ground speed with respect to Euclidean arc length (zero steps skipped).
double speed_integral(const FinslerMetric& m, const DiscreteTrajectory& traj);

}  // namespace zermelo
