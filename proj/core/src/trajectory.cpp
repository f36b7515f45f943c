#include "zermelo/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zermelo {

void DiscreteTrajectory::validate() const {
  const std::size_t T = v.size();
  if (t.size() != T + 1 || x.size() != T + 1)
    throw std::invalid_argument("trajectory: need |t| = |x| = |v| + 1, got |t| = " +
                                std::to_string(t.size()) + ", |x| = " + std::to_string(x.size()) +
                                ", |v| = " + std::to_string(T));
  if (T == 0) throw std::invalid_argument("trajectory: empty control sequence");
  double scale = 1.0;
  for (std::size_t s = 0; s <= T; ++s) scale = std::max(scale, x[s].cwiseAbs().maxCoeff());
  for (std::size_t s = 0; s < T; ++s) {
    if (!(t[s + 1] > t[s]))
      throw std::invalid_argument("trajectory: t must be strictly increasing, violated at s = " +
                                  std::to_string(s));
    if (((x[s] + v[s]) - x[s + 1]).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("trajectory: x[s+1] != x[s] + v[s] at s = " +
                                  std::to_string(s));
  }
}

DiscreteTrajectory rollout(const FinslerMetric& m, const Vec2& A, double t0,
                           const std::vector<Vec2>& controls) {
  if (controls.empty()) throw std::invalid_argument("rollout: empty control sequence");
  DiscreteTrajectory traj;
  const std::size_t T = controls.size();
  traj.t.resize(T + 1);
  traj.x.resize(T + 1);
  traj.v = controls;
  traj.t[0] = t0;
  traj.x[0] = A;
  for (std::size_t s = 0; s < T; ++s) {
    if (controls[s].x() == 0.0 && controls[s].y() == 0.0)
      throw std::domain_error("rollout: zero control vector at s = " + std::to_string(s));
    traj.t[s + 1] = traj.t[s] + m.F(traj.t[s], traj.x[s], controls[s]);
    traj.x[s + 1] = traj.x[s] + controls[s];
  }
  return traj;
}

double travel_time(const DiscreteTrajectory& traj) {
  if (traj.t.empty()) throw std::invalid_argument("travel_time: empty trajectory");
  return traj.t.back() - traj.t.front();
}

double energy(const DiscreteTrajectory& traj) {
  double E = 0.0;
  for (std::size_t s = 0; s + 1 < traj.t.size(); ++s) {
    const double dt = traj.t[s + 1] - traj.t[s];
    E += dt * dt;
  }
  return E;
}

double energy(const FinslerMetric&, const DiscreteTrajectory& traj) { return energy(traj); }

double speed_integral(const FinslerMetric& m, const DiscreteTrajectory& traj) {
  double acc = 0.0;
  for (std::size_t s = 0; s < traj.v.size(); ++s) {
    const double len2 = traj.v[s].squaredNorm();
    if (len2 == 0.0) continue;
    acc += len2 / m.F(traj.t[s], traj.x[s], traj.v[s]);
  }
  return acc;
}

}  // namespace zermelo
