#include "zermelo/multiconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zermelo {

namespace {

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

constexpr double kTwoPi = 2.0 * M_PI;

}  // namespace

// ---------------------------------------------------------------------------
// ConvexIndicatrix

ConvexIndicatrix ConvexIndicatrix::ellipse(const Vec2& center, double a, double b,
                                           double theta) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("indicatrix: semi-axes must be positive");
  ConvexIndicatrix s;
  s.is_ellipse_ = true;
  s.center_ = center;
  s.a_ = a;
  s.b_ = b;
  s.theta_ = theta;
  s.validate();
  return s;
}

ConvexIndicatrix ConvexIndicatrix::polyline(std::vector<Vec2> points) {
  if (points.size() < 8)
    throw std::invalid_argument("indicatrix: a polyline piece needs at least 8 points");
  ConvexIndicatrix s;
  s.is_ellipse_ = false;
  s.points_ = std::move(points);
  s.validate();
  return s;
}

void ConvexIndicatrix::validate() const {
  if (is_ellipse_) {
    // Origin strictly inside: the ellipse-frame constant term must be < 0.
    const double ct = std::cos(theta_), st = std::sin(theta_);
    const Vec2 ce(ct * center_.x() - st * center_.y(), st * center_.x() + ct * center_.y());
    const double c0 = (ce.x() / a_) * (ce.x() / a_) + (ce.y() / b_) * (ce.y() / b_) - 1.0;
    if (!(c0 < 0.0))
      throw std::invalid_argument("indicatrix: the ellipse does not enclose the origin");
    return;
  }
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p0 = points_[i];
    const Vec2& p1 = points_[(i + 1) % n];
    const Vec2& p2 = points_[(i + 2) % n];
    const Vec2 e0 = p1 - p0, e1 = p2 - p1;
    const double turn = cross(e0, e1);
    if (!(turn > 1e-8 * e0.norm() * e1.norm()))
      throw std::invalid_argument(
          "indicatrix: polyline is not strictly convex/counterclockwise at vertex " +
          std::to_string(i));
    if (!(cross(p0, p1) > 0.0))
      throw std::invalid_argument("indicatrix: the polyline does not enclose the origin");
  }
}

Vec2 ConvexIndicatrix::point(double u) const {
  if (is_ellipse_) {
    const double ct = std::cos(theta_), st = std::sin(theta_);
    const Vec2 e(a_ * std::cos(u), b_ * std::sin(u));
    // center + Rot(−θ)·e
    return center_ + Vec2(ct * e.x() + st * e.y(), -st * e.x() + ct * e.y());
  }
  const std::size_t n = points_.size();
  double frac = u / kTwoPi - std::floor(u / kTwoPi);
  const double pos = frac * static_cast<double>(n);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), n - 1);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * points_[i] + w * points_[(i + 1) % n];
}

double ConvexIndicatrix::ray_radius(const Vec2& dir) const {
  const double len = dir.norm();
  if (len == 0.0) throw std::invalid_argument("indicatrix: zero ray direction");
  const Vec2 d = dir / len;
  if (is_ellipse_) {
    const double ct = std::cos(theta_), st = std::sin(theta_);
    const Vec2 de(ct * d.x() - st * d.y(), st * d.x() + ct * d.y());
    const Vec2 ce(ct * center_.x() - st * center_.y(), st * center_.x() + ct * center_.y());
    const double A = (de.x() / a_) * (de.x() / a_) + (de.y() / b_) * (de.y() / b_);
    const double B = -2.0 * (de.x() * ce.x() / (a_ * a_) + de.y() * ce.y() / (b_ * b_));
    const double C = (ce.x() / a_) * (ce.x() / a_) + (ce.y() / b_) * (ce.y() / b_) - 1.0;
    return (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  }
  const std::size_t n = points_.size();
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Solve λ d = p0 + μ e by Cramer's rule on [d, −e][λ, μ]ᵀ = p0.
    const Vec2& p0 = points_[i];
    const Vec2 e = points_[(i + 1) % n] - p0;
    const double det = cross(d, -e);
    if (det == 0.0) continue;
    const double l = cross(p0, -e) / det;
    const double m = cross(d, p0) / det;
    if (m >= 0.0 && m < 1.0 && l > 0.0) best = std::max(best, l);
  }
  if (best <= 0.0)
    throw std::runtime_error("indicatrix: ray does not cross the polyline boundary");
  return best;
}

double ConvexIndicatrix::support(const Vec2& n, Vec2* contact) const {
  if (is_ellipse_) {
    const double ct = std::cos(theta_), st = std::sin(theta_);
    // m = Rot(θ)·n expresses the normal in the axis frame.
    const Vec2 m(ct * n.x() - st * n.y(), st * n.x() + ct * n.y());
    const double rad = std::sqrt(a_ * a_ * m.x() * m.x() + b_ * b_ * m.y() * m.y());
    if (contact) {
      const Vec2 e(a_ * a_ * m.x() / rad, b_ * b_ * m.y() / rad);
      *contact = center_ + Vec2(ct * e.x() + st * e.y(), -st * e.x() + ct * e.y());
    }
    return center_.dot(n) + rad;
  }
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double h = points_[i].dot(n);
    if (h > best) {
      best = h;
      arg = i;
    }
  }
  if (contact) *contact = points_[arg];
  return best;
}

// ---------------------------------------------------------------------------
// MultiConvexIndicatrix

double MultiConvexIndicatrix::radial(const Vec2& dir) const {
  if (pieces.empty()) throw std::invalid_argument("multiconvex: no pieces");
  double r = 0.0;
  for (const auto& p : pieces) r = std::max(r, p.ray_radius(dir));
  return r;
}

double MultiConvexIndicatrix::norm(const Vec2& v) const {
  const double len = v.norm();
  if (len == 0.0) throw std::domain_error("multiconvex: norm of the zero vector is undefined");
  return len / radial(v);
}

double norm_eval(const MultiConvexIndicatrix& sigma, const Vec2& v) { return sigma.norm(v); }

// ---------------------------------------------------------------------------
// Hull via dense support sampling

HullBoundary hull_boundary(const MultiConvexIndicatrix& sigma, int num_normals,
                           int samples_per_piece) {
  if (sigma.pieces.empty()) throw std::invalid_argument("hull_boundary: no pieces");
  if (num_normals < 256) throw std::invalid_argument("hull_boundary: need at least 256 normals");
  if (samples_per_piece < 4096)
    throw std::invalid_argument("hull_boundary: need at least 4096 samples per piece");

  const int P = static_cast<int>(sigma.pieces.size());
  const int M = num_normals;
  const int N = samples_per_piece;

  // Dense boundary samples per piece plus their perimeter (for the
  // contact stationarity tolerance).
  std::vector<std::vector<Vec2>> samples(P);
  double max_arc_step = 0.0;
  for (int p = 0; p < P; ++p) {
    samples[p].resize(N);
    double perim = 0.0;
    for (int k = 0; k < N; ++k) samples[p][k] = sigma.pieces[p].point(kTwoPi * k / N);
    for (int k = 0; k < N; ++k) perim += (samples[p][(k + 1) % N] - samples[p][k]).norm();
    max_arc_step = std::max(max_arc_step, perim / N);
  }
  const double contact_tol = 4.0 * max_arc_step;

  HullBoundary hull;
  hull.angles.resize(M);
  hull.support.resize(M);
  hull.contact.resize(M);
  hull.contact_piece.resize(M);
  hull.piece_support.resize(static_cast<std::size_t>(M) * P);
  hull.piece_contact.resize(static_cast<std::size_t>(M) * P);
  hull.num_pieces = P;
  hull.contact_tol = contact_tol;
  hull.pieces = sigma.pieces;

  std::vector<int> idx(P, 0);
  for (int p = 0; p < P; ++p) {
    // Brute-force the first normal; later normals hill-climb from there.
    double best = samples[p][0].x();
    for (int k = 1; k < N; ++k)
      if (samples[p][k].x() > best) {
        best = samples[p][k].x();
        idx[p] = k;
      }
  }

  std::vector<int> contact_idx(M, 0);
  for (int m = 0; m < M; ++m) {
    const double phi = kTwoPi * m / M;
    const Vec2 n(std::cos(phi), std::sin(phi));
    hull.angles[m] = phi;
    double h = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < P; ++p) {
      int k = idx[p];
      auto val = [&](int kk) { return samples[p][((kk % N) + N) % N].dot(n); };
      int guard = 0;
      while (guard++ < N && val(k + 1) > val(k)) ++k;
      guard = 0;
      while (guard++ < N && val(k - 1) > val(k)) --k;
      k = ((k % N) + N) % N;
      idx[p] = k;
      const double hp = samples[p][k].dot(n);
      hull.piece_support[static_cast<std::size_t>(m) * P + p] = hp;
      hull.piece_contact[static_cast<std::size_t>(m) * P + p] = samples[p][k];
      if (hp > h) {
        h = hp;
        hull.contact[m] = samples[p][k];
        hull.contact_piece[m] = p;
        contact_idx[m] = k;
      }
    }
    hull.support[m] = h;
  }

  // Boundary tangent jump at a sampled contact, from its sample
  // neighbours.  A genuine corner shows the angle between its two edges;
  // a smooth boundary shows only the per-sample turn.
  auto tangent_jump = [&](int m) {
    const int p = hull.contact_piece[m];
    const int k = contact_idx[m];
    const Vec2 tin = samples[p][k] - samples[p][(k - 1 + N) % N];
    const Vec2 tout = samples[p][(k + 1) % N] - samples[p][k];
    return std::abs(std::atan2(tin.x() * tout.y() - tin.y() * tout.x(), tin.dot(tout)));
  };

  // Cusps: maximal circular runs where the contact stays within
  // contact_tol of the run anchor while the normal sweeps > 1e-3 rad.
  const double dphi = kTwoPi / M;
  std::vector<char> in_run(M, 0);
  int m0 = 0;
  // Start scanning at a normal whose contact moves relative to its
  // predecessor, so runs are not split across the wrap.
  for (int m = 0; m < M; ++m)
    if ((hull.contact[m] - hull.contact[(m - 1 + M) % M]).norm() > contact_tol) {
      m0 = m;
      break;
    }
  int m = 0;
  while (m < M) {
    const int start = (m0 + m) % M;
    const Vec2 anchor = hull.contact[start];
    int len = 1;
    while (len < M &&
           (hull.contact[(m0 + m + len) % M] - anchor).norm() <= contact_tol)
      ++len;
    // A stationary contact across a widening normal cone is only a cusp
    // when the boundary itself turns there; high-curvature smooth spots
    // can hold a contact within the spatial tolerance too.
    if ((len - 1) * dphi > 1e-3 && tangent_jump((m0 + m + len / 2) % M) > 1e-3) {
      const Vec2 c = hull.contact[(m0 + m + len / 2) % M];
      bool dup = false;
      for (const Vec2& q : hull.cusps)
        if ((q - c).norm() <= contact_tol) dup = true;
      if (!dup) hull.cusps.push_back(c);
    }
    m += len;
  }
  return hull;
}

// ---------------------------------------------------------------------------

OptimalVelocities optimal_velocities(const HullBoundary& hull, const Vec2& A, const Vec2& B) {
  const Vec2 d = B - A;
  const double dn = d.norm();
  if (dn == 0.0) throw std::invalid_argument("optimal_velocities: A and B coincide");
  const Vec2 dir = d / dn;
  const int M = static_cast<int>(hull.angles.size());
  const int P = hull.num_pieces;

  // Exact hull support at a normal angle (max over the pieces).
  auto h_exact = [&](double psi) {
    const Vec2 n(std::cos(psi), std::sin(psi));
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& piece : hull.pieces) h = std::max(h, piece.support(n));
    return h;
  };
  // 1/r along dir as a function of the normal angle (to be maximized);
  // equivalently r(psi) = h(psi)/⟨n, dir⟩ is minimized over admissible psi.
  auto objective = [&](double psi) {
    const double proj = std::cos(psi) * dir.x() + std::sin(psi) * dir.y();
    if (proj <= 1e-9) return std::numeric_limits<double>::infinity();
    return h_exact(psi) / proj;
  };

  int mstar = -1;
  double r = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    const Vec2 n(std::cos(hull.angles[m]), std::sin(hull.angles[m]));
    const double proj = n.dot(dir);
    if (proj <= 1e-9) continue;
    const double cand = hull.support[m] / proj;
    if (cand < r) {
      r = cand;
      mstar = m;
    }
  }
  if (mstar < 0) throw std::runtime_error("optimal_velocities: no supporting normal found");

  // Golden-section refinement between the neighbouring sampled normals.
  // The objective is unimodal there but only piecewise smooth (the active
  // piece can switch at the minimizer), so gradient-free refinement it is.
  const double dphi = kTwoPi / M;
  double lo = hull.angles[mstar] - dphi, hi = hull.angles[mstar] + dphi;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), e = lo + gr * (hi - lo);
  double fc = objective(c), fe = objective(e);
  while (hi - lo > 1e-13) {
    if (fc < fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - gr * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + gr * (hi - lo);
      fe = objective(e);
    }
  }
  const double psi = 0.5 * (lo + hi);

  OptimalVelocities out;
  out.n_star = Vec2(std::cos(psi), std::sin(psi));
  out.support_value = h_exact(psi);
  r = out.support_value / out.n_star.dot(dir);
  const Vec2 Qv = r * dir;  // hull crossing in velocity space
  out.Q = A + Qv;

  for (const Vec2& c1 : hull.cusps)
    if ((c1 - Qv).norm() <= hull.contact_tol) {
      out.at_cusp = true;
      out.Qset = {Qv};
      return out;
    }

  // Contacts of every piece whose exact support attains the hull support.
  const double ctol = 1e-7 * std::max(1.0, std::abs(out.support_value));
  for (int p = 0; p < P; ++p) {
    Vec2 contact;
    const double hp = hull.pieces[p].support(out.n_star, &contact);
    if (hp >= out.support_value - ctol) out.Qset.push_back(contact);
  }
  // Merge coincident contacts from different pieces.
  std::vector<Vec2> merged;
  for (const Vec2& cq : out.Qset) {
    bool dup = false;
    for (const Vec2& q : merged)
      if ((q - cq).norm() <= hull.contact_tol) dup = true;
    if (!dup) merged.push_back(cq);
  }
  out.Qset = std::move(merged);
  return out;
}

MinTimeResult min_time_multiconvex(const HullBoundary& hull, const Vec2& A, const Vec2& B) {
  MinTimeResult res;
  res.opt = optimal_velocities(hull, A, B);
  const Vec2 d = B - A;

  if (res.opt.at_cusp || res.opt.Qset.size() <= 1) {
    const Vec2 V = res.opt.Q - A;  // exactly parallel to d by construction
    const double t1 = d.norm() / V.norm();
    res.time = t1;
    res.waypoints = {A, B};
    res.leg_times = {t1};
    res.leg_velocities = {V};
    return res;
  }

  // Two supporting contacts: decompose d = t1 V1 + t2 V2.
  const Vec2 V1 = res.opt.Qset[0], V2 = res.opt.Qset[1];
  const double det = cross(V1, V2);
  if (std::abs(det) < 1e-14 * V1.norm() * V2.norm()) {
    const Vec2 V = res.opt.Q - A;
    const double t1 = d.norm() / V.norm();
    res.time = t1;
    res.waypoints = {A, B};
    res.leg_times = {t1};
    res.leg_velocities = {V};
    return res;
  }
  double t1 = cross(d, V2) / det;
  double t2 = cross(V1, d) / det;
  if (t1 < 0.0 || t2 < 0.0) {
    if (t1 < -1e-9 * (std::abs(t1) + std::abs(t2)) || t2 < -1e-9 * (std::abs(t1) + std::abs(t2))) {
      // Sampling artifact at the edge of the supporting fan: fall back to
      // the straight witness along the hull crossing.
      const Vec2 V = res.opt.Q - A;
      const double t = d.norm() / V.norm();
      res.time = t;
      res.waypoints = {A, B};
      res.leg_times = {t};
      res.leg_velocities = {V};
      return res;
    }
    t1 = std::max(t1, 0.0);
    t2 = std::max(t2, 0.0);
  }
  res.time = t1 + t2;
  res.waypoints = {A, A + t1 * V1, B};
  res.leg_times = {t1, t2};
  res.leg_velocities = {V1, V2};
  return res;
}

OptimalVelocities optimal_velocities(const MultiConvexIndicatrix& sigma, const Vec2& A,
                                     const Vec2& B) {
  return optimal_velocities(hull_boundary(sigma), A, B);
}

MinTimeResult min_time_multiconvex(const MultiConvexIndicatrix& sigma, const Vec2& A,
                                   const Vec2& B) {
  return min_time_multiconvex(hull_boundary(sigma), A, B);
}

// ---------------------------------------------------------------------------
// Constant-metric one-tack optimum

namespace {

struct InnerResult {
  double time = 0.0;
  Vec2 tack = Vec2::Zero();
};

// Leg time with the zero-step convention F(0) := 0.
double leg_time(const FinslerMetric& m, const Vec2& v, double scale) {
  if (v.norm() <= 1e-14 * scale) return 0.0;
  return m.F(0.0, Vec2::Zero(), v);
}

// Best tack on the τ-wavefront {A + τ σ(ψ)} of Fa, judged by the Fb time
// of the remaining leg to B.
InnerResult inner_best(const FinslerMetric& Fa, const FinslerMetric& Fb, const Vec2& A,
                       const Vec2& B, double tau, double scale) {
  auto sigma = [&](double psi) {
    const Vec2 dir(std::cos(psi), std::sin(psi));
    return Vec2(dir / Fa.F(0.0, Vec2::Zero(), dir));
  };
  auto tack_at = [&](double psi) { return Vec2(A + tau * sigma(psi)); };
  auto remaining = [&](double psi) { return leg_time(Fb, B - tack_at(psi), scale); };

  if (tau <= 1e-14 * scale) return {remaining(0.0), A};

  const int K = 256;
  int best_k = 0;
  double best_g = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    const double g = remaining(kTwoPi * k / K);
    if (g < best_g) {
      best_g = g;
      best_k = k;
    }
  }

  // Fb-orthogonality residual ∇_vFb(B − p)·p′(ψ); its root near the
  // scanned minimum locates the τ-optimal tack.
  auto residual = [&](double psi) {
    const Vec2 p = tack_at(psi);
    const Vec2 leg = B - p;
    if (leg.norm() <= 1e-12 * scale) return 0.0;
    const double hpsi = 1e-6;
    const Vec2 dp = tau * (sigma(psi + hpsi) - sigma(psi - hpsi)) / (2.0 * hpsi);
    double dt;
    Vec2 dx, dv;
    Fb.first_derivatives(0.0, Vec2::Zero(), leg, dt, dx, dv);
    return -dv.dot(dp);  // d/dψ of the remaining time
  };

  double lo = kTwoPi * (best_k - 1) / K, hi = kTwoPi * (best_k + 1) / K;
  double flo = residual(lo), fhi = residual(hi);
  if (flo == 0.0) return {remaining(lo), tack_at(lo)};
  if (fhi == 0.0) return {remaining(hi), tack_at(hi)};
  if (flo * fhi < 0.0) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = residual(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm < 0.0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
  } else {
    // Degenerate bracket (e.g. the remaining leg vanishes): golden section.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), e = a + gr * (b - a);
    double fc = remaining(c), fe = remaining(e);
    for (int it = 0; it < 120; ++it) {
      if (fc < fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - gr * (b - a);
        fc = remaining(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + gr * (b - a);
        fe = remaining(e);
      }
    }
    lo = hi = 0.5 * (a + b);
  }
  const double psi = 0.5 * (lo + hi);
  return {remaining(psi), tack_at(psi)};
}

/// Probes the analytic time/position gradients at a spread of sample
/// points; a constant metric has both identically zero.
bool looks_constant(const FinslerMetric& m) {
  static const double ts[] = {0.0, 0.7, 2.3};
  static const Vec2 xs[] = {Vec2(0.0, 0.0), Vec2(1.3, -0.8), Vec2(-2.0, 4.0)};
  static const Vec2 vs[] = {Vec2(1.0, 0.0), Vec2(-0.3, 0.9)};
  for (double t : ts)
    for (const Vec2& x : xs)
      for (const Vec2& v : vs) {
        double dF_dt;
        Vec2 dF_dx, dF_dv;
        m.first_derivatives(t, x, v, dF_dt, dF_dx, dF_dv);
        const double tol = 1e-12 * std::max(1.0, m.F(t, x, v));
        if (std::abs(dF_dt) > tol || dF_dx.cwiseAbs().maxCoeff() > tol) return false;
      }
  return true;
}

}  // namespace

ConstantTackResult optimal_tack_constant(const FinslerMetric& Fa, const FinslerMetric& Fb,
                                         const Vec2& A, const Vec2& B) {
  const Vec2 d = B - A;
  if (d.norm() == 0.0) throw std::invalid_argument("optimal_tack_constant: A and B coincide");
  if (!looks_constant(Fa) || !looks_constant(Fb))
    throw std::invalid_argument("optimal_tack_constant: metric is not constant in time and position");
  const double Fad = Fa.F(0.0, Vec2::Zero(), d);
  const double Fbd = Fb.F(0.0, Vec2::Zero(), d);
  const double scale = std::max({1.0, Fad, d.norm()});

  auto total = [&](double tau) { return tau + inner_best(Fa, Fb, A, B, tau, scale).time; };

  const int K = 256;
  int best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= K; ++k) {
    const double v = total(Fad * k / K);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  double a = Fad * std::max(0, best_k - 1) / K;
  double b = Fad * std::min(K, best_k + 1) / K;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), e = a + gr * (b - a);
  double fc = total(c), fe = total(e);
  while (b - a > 1e-10 * scale) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - gr * (b - a);
      fc = total(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + gr * (b - a);
      fe = total(e);
    }
  }
  const double tau = 0.5 * (a + b);
  const InnerResult inner = inner_best(Fa, Fb, A, B, tau, scale);

  ConstantTackResult res;
  res.tau = tau;
  res.tack = inner.tack;
  res.time = tau + inner.time;
  const bool equal_straight = std::abs(Fad - Fbd) <= 1e-10 * scale;
  const bool straight_minimizing = res.time >= std::min(Fad, Fbd) - 1e-8 * scale;
  res.classification = (equal_straight && straight_minimizing)
                           ? TackClassification::kWholeSegment
                           : TackClassification::kUnique;
  return res;
}

Vec2 snell_residual(const FinslerMetric& Fa, const FinslerMetric& Fb, double t0, const Vec2& p,
                    const Vec2& v_in, const Vec2& v_out) {
  double dt;
  Vec2 dx, ga, gb;
  Fa.first_derivatives(t0, p, v_in, dt, dx, ga);
  Fb.first_derivatives(t0, p, v_out, dt, dx, gb);
  return ga - gb;
}

}  // namespace zermelo
