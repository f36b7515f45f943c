#include "zermelo/wavemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zermelo {

namespace {

// Adaptive Simpson for a Vec2-valued integrand, absolute tolerance per call.
Vec2 simpson_step(const std::function<Vec2(double)>& f, double a, double b, const Vec2& fa,
                  const Vec2& fm, const Vec2& fb, const Vec2& whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Vec2 flm = f(lm), frm = f(rm);
  const Vec2 left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Vec2 right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Vec2 err = left + right - whole;
  if (depth <= 0 || err.cwiseAbs().maxCoeff() < 15.0 * tol)
    return left + right + err / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

Vec2 integrate(const std::function<Vec2(double)>& f, double a, double b, double tol) {
  if (a == b) return Vec2::Zero();
  const Vec2 fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const Vec2 whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

struct EllipseCoefs {
  double a, b, theta;
  Vec2 W;
};

EllipseCoefs coefs_at(const EllipticZermeloParams& p, double t) {
  const FieldEval a = p.a(t, 0.0, 0.0);
  const FieldEval b = p.b(t, 0.0, 0.0);
  const FieldEval c1 = p.c1(t, 0.0, 0.0);
  const FieldEval c2 = p.c2(t, 0.0, 0.0);
  const FieldEval th = p.theta(t, 0.0, 0.0);
  if (!(a.v > 0.0) || !(b.v > 0.0))
    throw std::domain_error("wavemap: semi-axes must be positive at t = " + std::to_string(t));
  const double ct = std::cos(th.v), st = std::sin(th.v);
  // W = Rot(−θ)·(c1, c2)
  return {a.v, b.v, th.v, Vec2(c1.v * ct + c2.v * st, -c1.v * st + c2.v * ct)};
}

void require_time_only(const EllipticZermeloParams& p) {
  const ScalarField* fields[] = {&p.a, &p.b, &p.c1, &p.c2, &p.theta};
  const double probes[][3] = {{0.3, 0.7, -1.1}, {2.1, -0.4, 0.9}, {5.0, 3.0, 2.0}};
  for (const ScalarField* f : fields)
    for (const auto& q : probes) {
      const FieldEval e = (*f)(q[0], q[1], q[2]);
      if (e.dx != 0.0 || e.dy != 0.0)
        throw std::invalid_argument(
            "wavemap_ellipse_time_only: parameters must not depend on position");
    }
}

}  // namespace

InitialRegion InitialRegion::point(const Vec2& x0) {
  InitialRegion r;
  r.is_point = true;
  r.x0 = x0;
  return r;
}

InitialRegion InitialRegion::curve(std::function<Vec2(double)> z, std::function<Vec2(double)> dz,
                                   double length) {
  if (!z || !dz || !(length > 0.0))
    throw std::invalid_argument("InitialRegion::curve: need z, dz and a positive length");
  InitialRegion r;
  r.is_point = false;
  r.z = std::move(z);
  r.dz = std::move(dz);
  r.length = length;
  return r;
}

std::vector<WavefrontPolyline> wavemap_ellipse_time_only(
    const EllipticZermeloParams& params, const InitialRegion& region,
    const std::vector<double>& s_samples, double t0, const std::vector<double>& t_grid,
    bool outward, double quad_tol) {
  require_time_only(params);
  if (s_samples.empty() || t_grid.empty())
    throw std::invalid_argument("wavemap_ellipse_time_only: empty sample or time grid");
  for (std::size_t k = 0; k + 1 < t_grid.size(); ++k)
    if (!(t_grid[k] <= t_grid[k + 1]))
      throw std::invalid_argument("wavemap_ellipse_time_only: t_grid must be non-decreasing");
  if (t_grid.front() < t0)
    throw std::invalid_argument("wavemap_ellipse_time_only: t_grid precedes the source time");

  const double sign = outward ? 1.0 : -1.0;

  std::vector<WavefrontPolyline> fronts(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    fronts[k].time = t_grid[k];
    fronts[k].params = s_samples;
    fronts[k].points.resize(s_samples.size());
  }

  for (std::size_t i = 0; i < s_samples.size(); ++i) {
    const double s = s_samples[i];
    Vec2 base;
    std::function<Vec2(double)> vel;  // integrand: velocity at time r
    if (region.is_point) {
      base = region.x0;
      const double phi = s;
      vel = [&params, phi, sign](double r) {
        const EllipseCoefs c = coefs_at(params, r);
        const double ct = std::cos(c.theta), st = std::sin(c.theta);
        const Vec2 e(c.a * std::cos(phi), c.b * std::sin(phi));
        return Vec2(sign * (ct * e.x() + st * e.y()) + c.W.x(),
                    sign * (-st * e.x() + ct * e.y()) + c.W.y());
      };
    } else {
      base = region.z(s);
      const Vec2 tangent = region.dz(s);
      vel = [&params, tangent, sign](double r) {
        const EllipseCoefs c = coefs_at(params, r);
        const double ct = std::cos(c.theta), st = std::sin(c.theta);
        const double C = c.a * (tangent.x() * st + tangent.y() * ct);
        const double D = c.b * (-tangent.x() * ct + tangent.y() * st);
        const double n = std::hypot(C, D);
        if (n == 0.0)
          throw std::domain_error("wavemap_ellipse_time_only: zero source tangent");
        const Vec2 e(c.a * (C / n), c.b * (D / n));
        return Vec2(sign * (ct * e.x() + st * e.y()) + c.W.x(),
                    sign * (-st * e.x() + ct * e.y()) + c.W.y());
      };
    }
    // Accumulate the displacement across consecutive grid times.
    Vec2 acc = integrate(vel, t0, t_grid[0], quad_tol);
    fronts[0].points[i] = base + acc;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
      acc += integrate(vel, t_grid[k - 1], t_grid[k], quad_tol);
      fronts[k].points[i] = base + acc;
    }
  }
  return fronts;
}

Vec2 wavemap_circle_point(const std::function<double(double)>& R,
                          const std::function<Vec2(double)>& W, const Vec2& x0, double theta,
                          double t, double quad_tol) {
  if (!R || !W) throw std::invalid_argument("wavemap_circle_point: need R and W");
  const Vec2 dir(std::cos(theta), std::sin(theta));
  auto vel = [&](double r) -> Vec2 {
    const double rad = R(r);
    const Vec2 w = W(r);
    if (!(w.norm() < rad))
      throw std::domain_error("wavemap_circle_point: |W| >= R at t = " + std::to_string(r) +
                              " (|W| = " + std::to_string(w.norm()) + ", R = " +
                              std::to_string(rad) + ")");
    return rad * dir + w;
  };
  return x0 + integrate(vel, 0.0, t, quad_tol);
}

// ---------------------------------------------------------------------------
// Numeric pregeodesics of H = dt² − F_t²

namespace {

struct SpacetimeMetric {
  // g^H = diag(1, −G(t, x, v)) at the frozen direction v.
  static void gH(const FinslerMetric& m, double t, const Vec2& x, const Vec2& v, double out[3][3],
                 double* cond) {
    const Mat2 G = m.fundamental_tensor(t, x, v);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[i][j] = 0.0;
    out[0][0] = 1.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[i + 1][j + 1] = -G(i, j);
    if (cond) {
      const double tr = G(0, 0) + G(1, 1);
      const double det = G.determinant();
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      const double lo = std::abs(tr / 2.0 - disc), hi = std::abs(tr / 2.0 + disc);
      const double mx = std::max(1.0, hi), mn = std::min(1.0, lo);
      *cond = mn > 0.0 ? mx / mn : std::numeric_limits<double>::infinity();
    }
  }
};

// Spatial acceleration of the t-parametrized lightlike pregeodesic:
// ẍ^k = −γ^k_ij v̂^i v̂^j + γ⁰_ij v̂^i v̂^j ẋ^k with v̂ = (1, ẋ).
Vec2 geodesic_accel(const FinslerMetric& m, double t, const Vec2& x, const Vec2& xdot,
                    GeodesicDiagnostics* diag) {
  const double h = 1e-5;
  double g0[3][3], gp[3][3], gm[3][3];
  double cond = 0.0;
  SpacetimeMetric::gH(m, t, x, xdot, g0, &cond);
  if (diag) diag->max_condition = std::max(diag->max_condition, cond);
  if (cond > 1e12)
    throw std::runtime_error("geodesic_rollout_numeric: g^H condition number exceeds 1e12");

  // ∂ g^H / ∂ (t, x¹, x²) by central differences at the frozen direction.
  double dg[3][3][3];
  for (int c = 0; c < 3; ++c) {
    double tp = t, tm = t;
    Vec2 xp = x, xm = x;
    if (c == 0) {
      tp += h;
      tm -= h;
    } else {
      xp[c - 1] += h;
      xm[c - 1] -= h;
    }
    SpacetimeMetric::gH(m, tp, xp, xdot, gp, nullptr);
    SpacetimeMetric::gH(m, tm, xm, xdot, gm, nullptr);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[c][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
  }

  // Inverse of the block metric: diag(1, −G⁻¹).
  const double det = g0[1][1] * g0[2][2] - g0[1][2] * g0[2][1];
  double ginv[3][3] = {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  ginv[1][1] = g0[2][2] / det;
  ginv[2][2] = g0[1][1] / det;
  ginv[1][2] = ginv[2][1] = -g0[1][2] / det;

  const double vhat[3] = {1.0, xdot.x(), xdot.y()};
  double gamma[3] = {0.0, 0.0, 0.0};  // γ^k_ij v̂^i v̂^j
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int r = 0; r < 3; ++r) {
          if (ginv[k][r] == 0.0) continue;
          sum += ginv[k][r] * (dg[i][r][j] + dg[j][r][i] - dg[r][i][j]);
        }
        acc += 0.5 * sum * vhat[i] * vhat[j];
      }
    gamma[k] = acc;
  }
  return Vec2(-gamma[1] + gamma[0] * xdot.x(), -gamma[2] + gamma[0] * xdot.y());
}

}  // namespace

DiscreteTrajectory geodesic_rollout_numeric(const FinslerMetric& m, const Vec2& x0, double t0,
                                            const Vec2& v0, double t_end, int steps,
                                            GeodesicDiagnostics* diag) {
  if (steps < 1) throw std::invalid_argument("geodesic_rollout_numeric: steps must be >= 1");
  if (!(t_end > t0)) throw std::invalid_argument("geodesic_rollout_numeric: t_end must exceed t0");
  const double res0 = std::abs(m.F(t0, x0, v0) - 1.0);
  if (res0 > 1e-8)
    throw std::domain_error(
        "geodesic_rollout_numeric: initial velocity is not lightlike, |F - 1| = " +
        std::to_string(res0));

  GeodesicDiagnostics local;
  GeodesicDiagnostics* d = diag ? diag : &local;
  d->max_lightlike_residual = res0;
  d->max_condition = 0.0;

  const double dt = (t_end - t0) / steps;
  DiscreteTrajectory traj;
  traj.t.resize(steps + 1);
  traj.x.resize(steps + 1);
  traj.v.resize(steps);
  traj.t[0] = t0;
  traj.x[0] = x0;

  Vec2 x = x0, u = v0;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    const Vec2 k1x = u, k1u = geodesic_accel(m, t, x, u, d);
    const Vec2 k2x = u + 0.5 * dt * k1u,
               k2u = geodesic_accel(m, t + 0.5 * dt, x + 0.5 * dt * k1x, u + 0.5 * dt * k1u, d);
    const Vec2 k3x = u + 0.5 * dt * k2u,
               k3u = geodesic_accel(m, t + 0.5 * dt, x + 0.5 * dt * k2x, u + 0.5 * dt * k2u, d);
    const Vec2 k4x = u + dt * k3u,
               k4u = geodesic_accel(m, t + dt, x + dt * k3x, u + dt * k3u, d);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);

    traj.t[s + 1] = t0 + (s + 1) * dt;
    traj.x[s + 1] = x;
    traj.v[s] = traj.x[s + 1] - traj.x[s];

    const double res = std::abs(m.F(traj.t[s + 1], x, u) - 1.0);
    d->max_lightlike_residual = std::max(d->max_lightlike_residual, res);
    if (res > 1e-2)
      throw std::runtime_error(
          "geodesic_rollout_numeric: lightlike residual blow-up, |F - 1| = " +
          std::to_string(res) + " at t = " + std::to_string(traj.t[s + 1]));
  }
  return traj;
}

// ---------------------------------------------------------------------------

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

Convexity check_wavefront_convex(const std::vector<Vec2>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw std::invalid_argument("check_wavefront_convex: need at least 3 points");

  double max_edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = polygon[(i + 1) % n] - polygon[i];
    const double len = e.norm();
    if (len == 0.0)
      throw std::invalid_argument("check_wavefront_convex: repeated point at index " +
                                  std::to_string(i));
    max_edge = std::max(max_edge, len);
  }
  // Non-adjacent edge pairs must not cross.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j],
                             polygon[(j + 1) % n]))
        throw std::invalid_argument("check_wavefront_convex: self-intersection between edges " +
                                    std::to_string(i) + " and " + std::to_string(j));
    }

  const double zero_tol = 1e-10 * max_edge * max_edge;
  int pos = 0, neg = 0, zero = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = polygon[(i + 1) % n] - polygon[i];
    const Vec2 e1 = polygon[(i + 2) % n] - polygon[(i + 1) % n];
    const double c = e0.x() * e1.y() - e0.y() * e1.x();
    if (std::abs(c) <= zero_tol)
      ++zero;
    else if (c > 0.0)
      ++pos;
    else
      ++neg;
  }
  if (pos > 0 && neg > 0) return Convexity::kNonConvex;
  return zero == 0 ? Convexity::kStrictlyConvex : Convexity::kConvex;
}

Convexity check_wavefront_convex(const WavefrontPolyline& front) {
  return check_wavefront_convex(front.points);
}

std::vector<CutEvent> detect_cut(const std::vector<std::vector<Vec2>>& paths,
                                 const std::vector<double>& times) {
  const std::size_t n = paths.size();
  if (n < 2) throw std::invalid_argument("detect_cut: need at least two trajectories");
  for (const auto& p : paths)
    if (p.size() != times.size())
      throw std::invalid_argument("detect_cut: trajectory/grid size mismatch");

  Vec2 lo = paths[0][0], hi = paths[0][0];
  for (const auto& p : paths)
    for (const Vec2& q : p) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
  const double tol = 1e-6 * std::max(1e-30, (hi - lo).norm());

  std::vector<CutEvent> events;
  // k starts at 1: the first sample is the departure from the shared initial
  // region, where coincidences are not cuts.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 1; k < times.size(); ++k)
        if ((paths[i][k] - paths[j][k]).norm() <= tol) {
          events.push_back({static_cast<int>(i), static_cast<int>(j), times[k],
                            0.5 * (paths[i][k] + paths[j][k])});
          break;
        }
  std::sort(events.begin(), events.end(),
            [](const CutEvent& a, const CutEvent& b) { return a.time < b.time; });
  return events;
}

}  // namespace zermelo
