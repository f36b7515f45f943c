#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "zermelo/elliptic.hpp"
#include "zermelo/metric.hpp"
#include "zermelo/trajectory.hpp"

using namespace zermelo;

namespace {

MetricPtr position_only_alpha() {
  return std::make_shared<EllipticZermelo>(
      EllipticZermeloParams::from_expressions(
          Expression::parse("3*arctan(y)"), Expression::parse("3*arctan(y)"),
          Expression::parse("1.5*arctan(y)"), Expression::parse("1.5*arctan(y)"),
          Expression::parse("0")),
      "alpha");
}

ConformalEuclidean cos_conformal() {
  return ConformalEuclidean(
      [](const Vec2& x, Vec2* g) {
        if (g) *g = Vec2(-std::sin(x.x()), 0.0);
        return 2.0 + std::cos(x.x());
      },
      "conformal");
}

}  // namespace

TEST_CASE("rollout of a Euclidean straight line") {
  EuclideanMetric m;
  const std::vector<Vec2> controls(100, Vec2(0.01, 0.01));
  const DiscreteTrajectory traj = rollout(m, Vec2(0, 0), 0.0, controls);
  traj.validate();
  CHECK(traj.x.back().x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.x.back().y() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.t.back() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rollout accumulates the conformal line integral") {
  const ConformalEuclidean m = cos_conformal();
  for (const double c : {1.0, 2.0 * M_PI}) {
    const int T = 10000;
    const std::vector<Vec2> controls(T, Vec2(c / T, 0.0));
    const DiscreteTrajectory traj = rollout(m, Vec2(0, 0), 0.0, controls);
    CHECK(std::abs(traj.t.back() - (2.0 * c + std::sin(c))) <= 1e-4);
  }
}

TEST_CASE("straight-line crossing under the position-only metric") {
  auto alpha = position_only_alpha();
  const int T = 100000;
  const std::vector<Vec2> controls(T, Vec2(40.0 / T, 0.0));
  const DiscreteTrajectory traj = rollout(*alpha, Vec2(0, 1), 0.0, controls);
  // Along y = 1 the integrand is constant: F(1,0) = (sqrt(3)-1)/(3*atan(1)).
  const double slowness = (std::sqrt(3.0) - 1.0) / (3.0 * std::atan(1.0));
  CHECK(traj.t.back() == doctest::Approx(40.0 * slowness).epsilon(1e-9));
  // The corresponding reciprocal line integral sum_s |v_s|^2 / F(v_s).
  CHECK(std::abs(speed_integral(*alpha, traj) - 128.7) <= 0.1);
  CHECK(speed_integral(*alpha, traj) == doctest::Approx(40.0 / slowness).epsilon(1e-9));
}

TEST_CASE("rollout rejects zero controls with the offending index") {
  EuclideanMetric m;
  std::vector<Vec2> controls(10, Vec2(0.1, 0.0));
  controls[7] = Vec2::Zero();
  CHECK_THROWS_WITH_AS(rollout(m, Vec2(0, 0), 0.0, controls),
                       doctest::Contains("7"), std::domain_error);
}

TEST_CASE("trajectory validation catches broken invariants") {
  EuclideanMetric m;
  const std::vector<Vec2> controls(10, Vec2(0.1, 0.0));
  DiscreteTrajectory traj = rollout(m, Vec2(0, 0), 0.0, controls);
  traj.validate();

  DiscreteTrajectory bad_x = traj;
  bad_x.x[5].x() += 1e-6;
  CHECK_THROWS_AS(bad_x.validate(), std::invalid_argument);

  DiscreteTrajectory bad_t = traj;
  bad_t.t[5] = bad_t.t[6] + 0.1;  // not strictly increasing
  CHECK_THROWS_AS(bad_t.validate(), std::invalid_argument);

  DiscreteTrajectory bad_len = traj;
  bad_len.v.pop_back();
  CHECK_THROWS_AS(bad_len.validate(), std::invalid_argument);
}

TEST_CASE("travel time and energy on closed-form cases") {
  EuclideanMetric eu;
  const std::vector<Vec2> c100(100, Vec2(0.01, 0.01));
  const DiscreteTrajectory straight = rollout(eu, Vec2(0, 0), 0.0, c100);
  CHECK(travel_time(straight) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(energy(straight) == doctest::Approx(2.0 / 100.0).epsilon(1e-12));
  CHECK(energy(eu, straight) == doctest::Approx(2.0 / 100.0).epsilon(1e-12));

  // F = 2|v| over a unit segment: time 2, energy 4/T.
  auto twice = std::make_shared<EllipticZermelo>(
      EllipticZermeloParams::constants(0.5, 0.5, 0, 0, 0), "double-cost");
  for (const int T : {10, 64, 1000}) {
    const std::vector<Vec2> c(T, Vec2(1.0 / T, 0.0));
    const DiscreteTrajectory traj = rollout(*twice, Vec2(0, 0), 0.0, c);
    CHECK(travel_time(traj) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(energy(traj) == doctest::Approx(4.0 / T).epsilon(1e-12));
  }
}

TEST_CASE("energy equals the fundamental-tensor quadratic form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ax(0.5, 3.0), ang(0.0, 2 * M_PI), frac(0.0, 0.85),
      step(-0.05, 0.05);
  for (int rep = 0; rep < 100; ++rep) {
    const double a = ax(rng), b = ax(rng), rho = std::sqrt(frac(rng)), psi = ang(rng);
    const EllipticZermelo m(EllipticZermeloParams::constants(
        a, b, rho * a * std::cos(psi), rho * b * std::sin(psi), ang(rng)));
    std::vector<Vec2> controls;
    for (int s = 0; s < 40; ++s) controls.emplace_back(0.08 + step(rng), step(rng));
    const DiscreteTrajectory traj = rollout(m, Vec2(0, 0), 0.0, controls);
    double quad = 0.0;
    for (std::size_t s = 0; s < controls.size(); ++s) {
      const Mat2 G = m.fundamental_tensor(traj.t[s], traj.x[s], traj.v[s]);
      quad += traj.v[s].dot(G * traj.v[s]);
    }
    const double e = energy(m, traj);
    CHECK(std::abs(e - quad) < 1e-10 * e);
  }
}

TEST_CASE("reverse traversal reproduces the forward travel time") {
  // Constant metric: the reversed rollout is exact.
  auto alpha = std::make_shared<EllipticZermelo>(
      EllipticZermeloParams::constants(2, 2, 1.5 * std::cos(M_PI / 10),
                                       1.5 * std::sin(M_PI / 10), M_PI),
      "alpha");
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  std::vector<Vec2> controls;
  for (int s = 0; s < 200; ++s) controls.emplace_back(0.05 + 0.1 * d(rng), d(rng));
  const DiscreteTrajectory fwd = rollout(*alpha, Vec2(0, 0), 0.0, controls);
  std::vector<Vec2> rev_controls(controls.rbegin(), controls.rend());
  for (Vec2& v : rev_controls) v = -v;
  const DiscreteTrajectory bwd = rollout(*reverse(alpha), fwd.x.back(), 0.0, rev_controls);
  CHECK(travel_time(bwd) == doctest::Approx(travel_time(fwd)).epsilon(1e-12));

  // Position-dependent (time-independent) metric on a curved path: the
  // discrete sums agree to O(1/T).
  auto pa = position_only_alpha();
  double prev_diff = 0.0;
  for (const int T : {1000, 10000}) {
    std::vector<Vec2> cs;
    for (int s = 0; s < T; ++s) {
      const double u = double(s) / T;
      cs.emplace_back(40.0 / T, 2.0 * std::cos(3.0 * u) / T);
    }
    const DiscreteTrajectory f = rollout(*pa, Vec2(0, 1), 0.0, cs);
    std::vector<Vec2> rs(cs.rbegin(), cs.rend());
    for (Vec2& v : rs) v = -v;
    const DiscreteTrajectory b = rollout(*reverse(pa), f.x.back(), 0.0, rs);
    const double diff = std::abs(travel_time(f) - travel_time(b));
    if (T == 1000) {
      prev_diff = diff;
      CHECK(diff < 1e-2);
    } else {
      CHECK(diff < 0.2 * prev_diff + 1e-12);  // first-order shrink with the step
    }
  }
}
