#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "zermelo/elliptic.hpp"
#include "zermelo/georce.hpp"
#include "zermelo/trajectory.hpp"

using namespace zermelo;

namespace {

constexpr double kPi = 3.14159265358979323846;

MetricPtr constant_elliptic(double a, double b, double c1, double c2, double theta) {
  return std::make_shared<EllipticZermelo>(
      EllipticZermeloParams::constants(a, b, c1, c2, theta));
}

MetricPtr table2_constant_alpha() {
  return constant_elliptic(2.0, 2.0, 1.5 * std::cos(kPi / 10.0), 1.5 * std::sin(kPi / 10.0),
                           kPi);
}

MetricPtr table2_constant_beta() { return constant_elliptic(1.0, 1.0, 0.75, 0.0, 0.0); }

MetricPtr elliptic_expr(const char* a, const char* b, const char* c1, const char* c2,
                        const char* theta) {
  return std::make_shared<EllipticZermelo>(EllipticZermeloParams::from_expressions(
      Expression::parse(a), Expression::parse(b), Expression::parse(c1), Expression::parse(c2),
      Expression::parse(theta)));
}

MetricPtr position_only_alpha() {
  return elliptic_expr("3*arctan(y)", "3*arctan(y)", "1.5*arctan(y)", "1.5*arctan(y)", "0");
}

MetricPtr position_only_beta() {
  return elliptic_expr("3*arctan(y)", "3*arctan(y)", "1.5*arctan(y)", "-1.5*arctan(y)", "0");
}

MetricPtr time_only_alpha() {
  return elliptic_expr("2+0.5*sin(t)", "0.75*(2+0.5*sin(t))", "-cos(t*pi/4)", "-sin(t*pi/4)",
                       "0");
}

/// Jets along a discrete trajectory, as the solver evaluates them.
std::vector<FinslerJet> jets_along(const FinslerMetric& m, const DiscreteTrajectory& traj) {
  std::vector<FinslerJet> jets(traj.v.size());
  for (std::size_t s = 0; s < traj.v.size(); ++s)
    jets[s] = eval_jet(m, traj.t[s], traj.x[s], traj.v[s]);
  return jets;
}

/// A feasible wiggly trial: controls sum to B − A but point all over.
std::vector<Vec2> wiggly_controls(const Vec2& A, const Vec2& B, int T, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<Vec2> v(T, (B - A) / T);
  for (int s = 0; s + 1 < T; s += 2) {
    const Vec2 bump(u(rng), u(rng));
    v[s] += bump;
    v[s + 1] -= bump;
  }
  return v;
}

double max_deviation_from_segment(const DiscreteTrajectory& traj, const Vec2& A, const Vec2& B) {
  const Vec2 d = B - A;
  const Vec2 n = Vec2(-d.y(), d.x()).normalized();
  double worst = 0.0;
  for (const Vec2& x : traj.x) worst = std::max(worst, std::abs(n.dot(x - A)));
  return worst;
}

double control_error(const DiscreteTrajectory& traj, const Vec2& vstar) {
  double e = 0.0;
  for (const Vec2& v : traj.v) e = std::max(e, (v - vstar).cwiseAbs().maxCoeff());
  return e;
}

double max_second_difference(const std::vector<double>& t) {
  double d2 = 0.0;
  for (std::size_t s = 1; s + 1 < t.size(); ++s)
    d2 = std::max(d2, std::abs(t[s + 1] - 2.0 * t[s] + t[s - 1]));
  return d2;
}

}  // namespace

TEST_CASE("solver configuration and endpoints are validated") {
  EuclideanMetric m;
  SolverConfig cfg;

  cfg.tol = 0.0;
  CHECK_THROWS_AS(georce_solve(m, Vec2(0, 0), Vec2(1, 0), 0.0, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.T = 1;
  CHECK_THROWS_AS(georce_solve(m, Vec2(0, 0), Vec2(1, 0), 0.0, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.rho = 1.0;
  CHECK_THROWS_AS(georce_solve(m, Vec2(0, 0), Vec2(1, 0), 0.0, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  CHECK_THROWS_AS(georce_solve(m, Vec2(1, 2), Vec2(1, 2), 0.0, cfg), std::invalid_argument);
}

TEST_CASE("dual recursion: no time coupling means zero prices") {
  const auto beta = table2_constant_beta();
  const auto traj = rollout(*beta, Vec2(0, 0), 0.0, wiggly_controls(Vec2(0, 0), Vec2(2, 8), 8, 3));
  const auto pi = backward_duals(jets_along(*beta, traj));
  REQUIRE(pi.size() == 8);
  for (double p : pi) CHECK(std::abs(p) <= 1e-15);
}

TEST_CASE("dual recursion: hand-checked three-step chain") {
  std::vector<FinslerJet> jets(3);
  jets[1].xi = 1.0;
  jets[2].xi = 2.0;
  const auto pi = backward_duals(jets);
  REQUIRE(pi.size() == 3);
  CHECK(pi[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(pi[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pi[2] == 0.0);
}

TEST_CASE("dual recursion: breathing circle against a finite-difference oracle") {
  const auto m = elliptic_expr("1-0.5*sin(t)", "1-0.5*sin(t)", "0", "0", "0");
  const int T = 16;
  const Vec2 A(0, 0), B(2, 0);
  const auto traj = rollout(*m, A, 0.0, std::vector<Vec2>(T, (B - A) / T));
  const auto jets = jets_along(*m, traj);
  const auto pi = backward_duals(jets);

  // Independently difference the fundamental tensor in t and rerun the
  // recursion by hand.
  const double h = 1e-6;
  std::vector<double> xi(T), Lt(T);
  for (int s = 0; s < T; ++s) {
    const Mat2 dG = (m->fundamental_tensor(traj.t[s] + h, traj.x[s], traj.v[s]) -
                     m->fundamental_tensor(traj.t[s] - h, traj.x[s], traj.v[s])) /
                    (2.0 * h);
    xi[s] = traj.v[s].dot(dG * traj.v[s]);
    double dF_dt;
    Vec2 dF_dx, dF_dv;
    m->first_derivatives(traj.t[s], traj.x[s], traj.v[s], dF_dt, dF_dx, dF_dv);
    Lt[s] = dF_dt;
  }
  std::vector<double> expected(T, 0.0);
  for (int s = T - 1; s >= 1; --s) expected[s - 1] = xi[s] + expected[s] * Lt[s] + expected[s];

  for (int s = 0; s < T; ++s) CHECK(std::abs(pi[s] - expected[s]) <= 1e-8);
}

TEST_CASE("control update: Euclidean collapses to the straight line in one step") {
  EuclideanMetric m;
  const Vec2 A(0, 0), B(1, 1);
  const int T = 10;
  const auto traj = rollout(m, A, 0.0, wiggly_controls(A, B, T, 5));
  const auto jets = jets_along(m, traj);
  Vec2 mu;
  const auto v = update_controls(jets, std::vector<double>(T, 0.0), A, B, &mu);

  const Vec2 vstar = (B - A) / T;
  for (const Vec2& vs : v) CHECK((vs - vstar).norm() <= 1e-12);
  CHECK((mu - 2.0 * (A - B) / T).norm() <= 1e-12);
}

TEST_CASE("control update: a constant quadratic metric cancels out") {
  // c1 = c2 = 0 makes the elliptic metric Riemannian with a constant
  // anisotropic tensor, so the optimizer sees a pure quadratic.
  const auto m = constant_elliptic(2.0, 0.5, 0.0, 0.0, 0.7);
  const Vec2 A(0, 0), B(2, 8);
  const int T = 12;
  const auto traj = rollout(*m, A, 0.0, wiggly_controls(A, B, T, 7));
  const auto jets = jets_along(*m, traj);
  const auto v = update_controls(jets, std::vector<double>(T, 0.0), A, B);

  const Vec2 vstar = (B - A) / T;
  Vec2 sum = Vec2::Zero();
  for (const Vec2& vs : v) {
    CHECK((vs - vstar).norm() <= 1e-10);
    sum += vs;
  }
  CHECK((sum - (B - A)).norm() <= 1e-10 * (B - A).norm());
}

TEST_CASE("control update: output satisfies the stationarity equation") {
  const auto beta = table2_constant_beta();
  const Vec2 A(0, 0), B(2, 8);
  const int T = 20;
  const auto traj = rollout(*beta, A, 0.0, std::vector<Vec2>(T, (B - A) / T));
  const auto jets = jets_along(*beta, traj);
  const auto pi = backward_duals(jets);
  Vec2 mu;
  const auto v = update_controls(jets, pi, A, B, &mu);

  // For a constant metric the position duals are constant (ν ≡ 0), so
  // μ_s ≡ μ_{T−1} and the first necessary condition reads
  // 2 G_s v_s + ζ_s + μ + π_s L_s^(v) = 0.
  Vec2 sum = Vec2::Zero();
  for (int s = 0; s < T; ++s) {
    const Vec2 residual =
        2.0 * jets[s].G * v[s] + jets[s].zeta + mu + pi[s] * jets[s].dF_dv;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
    sum += v[s];
  }
  CHECK((sum - (B - A)).norm() <= 1e-10 * (B - A).norm());
}

TEST_CASE("control update rejects an ill-conditioned tensor") {
  std::vector<FinslerJet> jets(4);
  for (auto& j : jets) j.G = Mat2::Identity();
  jets[2].G(1, 1) = 1e-13;
  CHECK_THROWS_AS(update_controls(jets, std::vector<double>(4, 0.0), Vec2(0, 0), Vec2(1, 0)),
                  std::runtime_error);
}

TEST_CASE("solve: Euclidean shortest path in at most two iterations") {
  EuclideanMetric m;
  SolverConfig cfg;
  cfg.T = 100;
  const auto r = georce_solve(m, Vec2(0, 0), Vec2(1, 1), 0.0, cfg);
  CHECK(r.diag.converged);
  CHECK(r.diag.iterations <= 2);
  CHECK(std::abs(travel_time(r.trajectory) - std::sqrt(2.0)) <= 1e-10);
  CHECK(max_deviation_from_segment(r.trajectory, Vec2(0, 0), Vec2(1, 1)) <= 1e-12);
}

TEST_CASE("solve: constant metrics travel straight at the Minkowski norm") {
  const Vec2 A(0, 0), B(2, 8);
  for (const auto& m : {table2_constant_alpha(), table2_constant_beta()}) {
    SolverConfig cfg;
    cfg.T = 100;
    const auto r = georce_solve(*m, A, B, 0.0, cfg);
    CHECK(r.diag.converged);
    CHECK(std::abs(travel_time(r.trajectory) - m->F(0.0, Vec2::Zero(), B - A)) <= 1e-8);
    CHECK(max_deviation_from_segment(r.trajectory, A, B) <= 1e-8);
  }
}

TEST_CASE("solve: position-only crossing reproduces the reference travel time") {
  const Vec2 A(0, 1), B(40, 1);
  SolverConfig cfg;
  cfg.T = 100;
  for (const auto& m : {position_only_alpha(), position_only_beta()}) {
    const auto r = georce_solve(*m, A, B, 0.0, cfg);
    CHECK(r.diag.converged);
    const double time = travel_time(r.trajectory);
    CHECK(std::abs(time - 8.24) <= 0.02 * 8.24);
    CHECK(std::abs(time - 8.2362) <= 2e-3);
  }
}

TEST_CASE("invariants: feasibility, monotone energy, stationarity, time curvature") {
  struct Scenario {
    MetricPtr m;
    Vec2 A, B;
    int T;
  };
  const Scenario scenarios[] = {
      {std::make_shared<EuclideanMetric>(), Vec2(0, 0), Vec2(1, 1), 100},
      {table2_constant_beta(), Vec2(0, 0), Vec2(2, 8), 100},
      {position_only_alpha(), Vec2(0, 1), Vec2(40, 1), 100},
      {position_only_alpha(), Vec2(0, 1), Vec2(40, 1), 200},
      {time_only_alpha(), Vec2(0, 0), Vec2(2, 8), 100},
  };

  for (const auto& sc : scenarios) {
    SolverConfig cfg;
    cfg.T = sc.T;
    const auto r = georce_solve(*sc.m, sc.A, sc.B, 0.0, cfg);
    CHECK(r.diag.converged);

    // Endpoint feasibility.
    CHECK((r.trajectory.x.front() - sc.A).norm() == 0.0);
    CHECK((r.trajectory.x.back() - sc.B).norm() <= 1e-10 * (1.0 + sc.B.norm()));

    // Energy is non-increasing across accepted iterations.
    const auto& eh = r.diag.energy_history;
    REQUIRE(!eh.empty());
    for (std::size_t i = 1; i < eh.size(); ++i)
      CHECK(eh[i] <= eh[i - 1] + 1e-12 * std::abs(eh[i - 1]));

    // Full necessary-conditions residual at convergence.
    CHECK(r.diag.stationarity < 10.0 * cfg.tol);

    // Discrete analogue of t'' = 0.
    const double range = r.trajectory.t.back() - r.trajectory.t.front();
    CHECK(max_second_difference(r.trajectory.t) <= 4.0 * range / (sc.T * sc.T));
  }
}

TEST_CASE("quadratic tail on problems with a known optimum") {
  const Vec2 A(0, 0), B(2, 8);
  const int T = 100;
  const Vec2 vstar = (B - A) / T;

  // A feasible zig-zag warm start away from the optimum.
  std::vector<Vec2> warm(T);
  for (int s = 0; s < T; ++s)
    warm[s] = vstar + ((s % 2 == 0) ? 1.0 : -1.0) * Vec2(0.05, -0.03);

  SUBCASE("Euclidean: exact in one iteration") {
    EuclideanMetric m;
    SolverConfig cfg;
    cfg.T = T;
    cfg.tol = 1e-16;
    cfg.max_iter = 1;
    const auto r = georce_solve(m, A, B, 0.0, cfg, &warm);
    CHECK(control_error(r.trajectory, vstar) <= 1e-14);
  }

  SUBCASE("constant elliptic: error squares once the full step is accepted") {
    const auto beta = table2_constant_beta();
    SolverConfig cfg;
    cfg.T = T;
    cfg.tol = 1e-12;
    const auto ref = georce_solve(*beta, A, B, 0.0, cfg, &warm);
    CHECK(ref.diag.converged);
    const int n = ref.diag.iterations;
    REQUIRE(n >= 4);
    for (int b : ref.diag.backtracks) CHECK(b == 0);

    // Reconstruct the per-iteration error by capping the iteration count
    // on identical warm-started runs.
    std::vector<double> e;
    e.push_back(control_error(rollout(*beta, A, 0.0, warm), vstar));
    for (int cap = 1; cap <= n; ++cap) {
      SolverConfig c = cfg;
      c.tol = 1e-16;
      c.max_iter = cap;
      e.push_back(control_error(georce_solve(*beta, A, B, 0.0, c, &warm).trajectory, vstar));
    }

    // e_{i+1} <= c·e_i² with modest c over the final contracting steps.
    int checked = 0;
    for (int i = static_cast<int>(e.size()) - 2; i >= 1 && checked < 3; --i) {
      if (e[i] < 1e-13) continue;  // already at machine precision
      CHECK(e[i + 1] <= 2.0 * e[i] * e[i]);
      ++checked;
    }
    CHECK(checked == 3);
  }
}

TEST_CASE("the start time offsets the whole clock") {
  const auto beta = table2_constant_beta();
  SolverConfig cfg;
  cfg.T = 50;
  const auto r0 = georce_solve(*beta, Vec2(0, 0), Vec2(2, 8), 0.0, cfg);
  const auto r1 = georce_solve(*beta, Vec2(0, 0), Vec2(2, 8), 3.7, cfg);
  CHECK(r1.trajectory.t.front() == 3.7);
  CHECK(std::abs((r1.trajectory.t.back() - 3.7) - travel_time(r0.trajectory)) <= 1e-10);
}
