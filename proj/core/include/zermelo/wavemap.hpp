#pragma once

#include <functional>
#include <vector>

#include "zermelo/elliptic.hpp"
#include "zermelo/metric.hpp"
#include "zermelo/trajectory.hpp"

namespace zermelo {

/// Source of a wavemap: either a single point (wavefront parametrized by
/// the initial direction angle) or a closed unit-speed counterclockwise
/// curve z(s), s ∈ [0, length), with tangent dz(s).
struct InitialRegion {
  bool is_point = true;
  Vec2 x0 = Vec2::Zero();
  std::function<Vec2(double)> z, dz;
  double length = 0.0;

  static InitialRegion point(const Vec2& x0);
  static InitialRegion curve(std::function<Vec2(double)> z, std::function<Vec2(double)> dz,
                             double length);
};

/// One wavefront: the image of the sample parameters at a fixed time.
struct WavefrontPolyline {
  double time = 0.0;
  std::vector<double> params;  ///< s (curve sources) or direction angle
  std::vector<Vec2> points;
};

/// Closed-form wavemap for a time-only shifted-ellipse metric.  Each
/// source parameter propagates independently:
///
///   x(t, s) = z(s) + ∫_{t0}^{t} [ ± Rot(−θ(r))·(a(r) cos φ, b(r) sin φ) + W(r) ] dr,
///
/// where φ is fixed by the source tangent via
/// cos φ = C/√(C²+D²), sin φ = D/√(C²+D²),
/// C = a(x¹_s sinθ + x²_s cosθ), D = b(−x¹_s cosθ + x²_s sinθ),
/// and the sign selects the outward ("+", for a counterclockwise region)
/// or inward branch.  Point sources use φ = parameter directly.
/// Quadrature: adaptive Simpson with absolute tolerance `quad_tol`.
/// Throws std::invalid_argument if the parameters depend on position.
std::vector<WavefrontPolyline> wavemap_ellipse_time_only(
    const EllipticZermeloParams& params, const InitialRegion& region,
    const std::vector<double>& s_samples, double t0, const std::vector<double>& t_grid,
    bool outward = true, double quad_tol = 1e-10);

/// Point-source wavemap for a circular profile R(t) with drift W(t):
///
///   x(t) = x0 + (cos θ ∫R, sin θ ∫R) + ∫W,
///
/// integrating from 0 to t.  Throws std::domain_error when |W| ≥ R
/// anywhere the quadrature samples.
Vec2 wavemap_circle_point(const std::function<double(double)>& R,
                          const std::function<Vec2(double)>& W, const Vec2& x0, double theta,
                          double t, double quad_tol = 1e-10);

struct GeodesicDiagnostics {
  double max_lightlike_residual = 0.0;  ///< max |F(t, x, ẋ) − 1| over the run
  double max_condition = 0.0;           ///< largest condition number of g^H
};

/// Integrates the t-parametrized pregeodesic ODE of H = dt² − F_t² with
/// fixed-step RK4 from (t0, x0) with initial velocity v0 (must satisfy
/// |F(t0, x0, v0) − 1| ≤ 1e-8).  The spacetime metric g^H = diag(1, −G)
/// is evaluated at the frozen direction (1, ẋ); its Christoffel symbols
/// use central differences (step 1e-5) in (t, x).  The result is sampled
/// into DiscreteTrajectory form on the uniform time grid, so the
/// discrete lightlike identity holds up to the monitored residual.
DiscreteTrajectory geodesic_rollout_numeric(const FinslerMetric& m, const Vec2& x0, double t0,
                                            const Vec2& v0, double t_end, int steps,
                                            GeodesicDiagnostics* diag = nullptr);

enum class Convexity { kStrictlyConvex, kConvex, kNonConvex };

/// Orientation census of the signed cross products of consecutive edges
/// of a closed polygon.  Cross products with magnitude below
/// 1e-10·(max edge length)² count as zero.  Throws on fewer than three
/// points, repeated consecutive points, or a self-intersecting polygon.
Convexity check_wavefront_convex(const std::vector<Vec2>& polygon);
Convexity check_wavefront_convex(const WavefrontPolyline& front);

struct CutEvent {
  int i = 0, j = 0;   ///< trajectory indices, i < j
  double time = 0.0;  ///< earliest grid time of coincidence
  Vec2 point = Vec2::Zero();
};

/// Earliest spatial coincidences between distinct t-parametrized
/// trajectories sharing the grid `times`: for each pair, the first grid
/// index where the points fall within 1e-6·(domain scale).  Results are
/// sorted by time.
std::vector<CutEvent> detect_cut(const std::vector<std::vector<Vec2>>& paths,
                                 const std::vector<double>& times);

}  // namespace zermelo
