#pragma once

#include <vector>

#include "zermelo/metric.hpp"

namespace zermelo {

/// One strictly convex indicatrix piece enclosing the origin: either a
/// shifted rotated ellipse (center + semi-axes + clockwise rotation) or a
/// dense counterclockwise polyline.  Validated at construction: strict
/// convexity on samples (tolerance 1e-8 of the squared scale) and the
/// origin strictly inside.
class ConvexIndicatrix {
 public:
  static ConvexIndicatrix ellipse(const Vec2& center, double a, double b, double theta);
  static ConvexIndicatrix polyline(std::vector<Vec2> points);

  /// Boundary point at parameter u ∈ [0, 2π) (ellipse angle, or arc
  /// position scaled to [0, 2π) for polylines).
  Vec2 point(double u) const;

  /// The positive factor r with r·dir on the boundary (dir ≠ 0).
  double ray_radius(const Vec2& dir) const;

  /// Exact support value max_{p ∈ piece} ⟨p, n⟩ (closed form for ellipses,
  /// vertex maximum for polylines), optionally with an attaining point.
  double support(const Vec2& n, Vec2* contact = nullptr) const;

  bool is_ellipse() const { return is_ellipse_; }
  const std::vector<Vec2>& vertices() const { return points_; }

 private:
  ConvexIndicatrix() = default;
  void validate() const;

  bool is_ellipse_ = false;
  Vec2 center_ = Vec2::Zero();
  double a_ = 0.0, b_ = 0.0, theta_ = 0.0;
  std::vector<Vec2> points_;  // polyline storage
};

/// Union of convex pieces with the radial profile
/// r(φ) = max over pieces of the piece's ray radius along φ.
struct MultiConvexIndicatrix {
  std::vector<ConvexIndicatrix> pieces;

  double radial(const Vec2& dir) const;
  /// ||v||_Σ = |v| / r(v/|v|).  Throws std::domain_error for v = 0.
  double norm(const Vec2& v) const;
};

/// Convenience form of MultiConvexIndicatrix::norm.
double norm_eval(const MultiConvexIndicatrix& sigma, const Vec2& v);

/// Sampled support description of the convex hull Σ̂ of the union.
struct HullBoundary {
  std::vector<double> angles;    ///< normal angles, uniform on [0, 2π)
  std::vector<double> support;   ///< h(angle)
  std::vector<Vec2> contact;     ///< one argmax boundary point per normal
  std::vector<int> contact_piece;
  std::vector<Vec2> cusps;       ///< hull corners (normal cone wider than 1e-3 rad)

  /// Per-normal, per-piece support data (row-major, angle-major), kept so
  /// contact sets can be collected at any supporting normal.
  std::vector<double> piece_support;
  std::vector<Vec2> piece_contact;
  int num_pieces = 0;
  double contact_tol = 0.0;  ///< spatial stationarity tolerance (sampling scale)

  /// The pieces themselves, for exact support refinement between the
  /// sampled normals.
  std::vector<ConvexIndicatrix> pieces;
};

/// Dense support-function sampling: `num_normals` uniform normal angles,
/// `samples_per_piece` boundary samples per piece.  A contact point that
/// stays put while the normal sweeps more than 1e-3 rad is a cusp.
HullBoundary hull_boundary(const MultiConvexIndicatrix& sigma, int num_normals = 16384,
                           int samples_per_piece = 131072);

struct OptimalVelocities {
  Vec2 Q = Vec2::Zero();       ///< ray A→B intersected with A + Σ̂ (hull frame)
  std::vector<Vec2> Qset;      ///< indicatrix velocities realizing the support
  bool at_cusp = false;
  Vec2 n_star = Vec2::Zero();  ///< active supporting normal
  double support_value = 0.0;  ///< h(n_star)
};

/// Active supporting normal, hull crossing Q and contact set for the
/// direction B − A.  The sampled-normal minimizer of h(n)/⟨n, d⟩ is
/// refined by golden section on the exact piece supports, so facet
/// normals (where the active piece switches) are located exactly.
/// When Q lies on a cusp the contact set is {Q − A}.
OptimalVelocities optimal_velocities(const HullBoundary& hull, const Vec2& A, const Vec2& B);
OptimalVelocities optimal_velocities(const MultiConvexIndicatrix& sigma, const Vec2& A,
                                     const Vec2& B);

struct MinTimeResult {
  double time = 0.0;
  OptimalVelocities opt;
  std::vector<Vec2> waypoints;       ///< A, tack points..., B
  std::vector<double> leg_times;
  std::vector<Vec2> leg_velocities;  ///< indicatrix velocities per leg
};

/// Minimal travel time ⟨B−A, n*⟩ / h(n*) together with a realizing
/// piecewise-segment witness (at most |Qset| − 1 tacks); the witness leg
/// times sum to the returned time within 1e-10.
MinTimeResult min_time_multiconvex(const HullBoundary& hull, const Vec2& A, const Vec2& B);
MinTimeResult min_time_multiconvex(const MultiConvexIndicatrix& sigma, const Vec2& A,
                                   const Vec2& B);

enum class TackClassification { kUnique, kWholeSegment };

struct ConstantTackResult {
  Vec2 tack = Vec2::Zero();
  double time = 0.0;
  double tau = 0.0;  ///< optimal first-leg duration
  TackClassification classification = TackClassification::kUnique;
};

/// One-tack optimum between two constant metrics: scans the first-leg
/// duration τ ∈ [0, F^α(B−A)] (256 samples + golden-section to 1e-10);
/// for each τ the tack point is located on the τ-wavefront of F^α by
/// root-finding the F^β-orthogonality condition in the wavefront
/// parameter.  Classifies the optimum as the whole segment exactly when
/// the straight segment is minimizing and F^α(B−A) = F^β(B−A) (1e-10).
ConstantTackResult optimal_tack_constant(const FinslerMetric& Fa, const FinslerMetric& Fb,
                                         const Vec2& A, const Vec2& B);

/// Refraction residual d = ∂F^α/∂v(v_in) − ∂F^β/∂v(v_out), evaluated at
/// the tack (t0, p).  Zero at an interior optimal tack.
Vec2 snell_residual(const FinslerMetric& Fa, const FinslerMetric& Fb, double t0, const Vec2& p,
                    const Vec2& v_in, const Vec2& v_out);

}  // namespace zermelo
