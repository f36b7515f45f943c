#pragma once

#include <functional>
#include <optional>

#include "zermelo/expression.hpp"
#include "zermelo/metric.hpp"

namespace zermelo {

/// A scalar coefficient field of (t, x, y) with analytic first partials.
using ScalarField = std::function<FieldEval(double t, double x, double y)>;

ScalarField field_constant(double value);
ScalarField field_from(const Expression& e);

/// Parameters of the shifted-ellipse Zermelo metric.  The indicatrix at
/// (t, x) is the ellipse with semi-axes a, b, rotated clockwise by theta,
/// translated by the drift W = Rot(-theta)·(c1, c2):
///
///   Σ = { W + Rot(-theta)·(a cos φ, b sin φ) : φ ∈ [0, 2π) }.
///
/// Validity (checked lazily at evaluation points): a > 0, b > 0 and
/// (c1/a)² + (c2/b)² < 1 (drift strictly inside the self-propulsion
/// ellipse, so that the indicatrix encloses the origin).
struct EllipticZermeloParams {
  ScalarField a, b, c1, c2, theta;

  static EllipticZermeloParams constants(double a, double b, double c1, double c2,
                                         double theta);
  static EllipticZermeloParams from_expressions(const Expression& a, const Expression& b,
                                                const Expression& c1, const Expression& c2,
                                                const Expression& theta);
};

/// Shifted-ellipse Zermelo metric
///
///   F(t, x, v) = (ω + √(Λ vᵀhv + ω²)) / Λ,
///
/// with h = Rᵀ diag(a⁻², b⁻²) R, W = Rᵀ(c1, c2), ω = −vᵀhW and
/// Λ = 1 − WᵀhW.  All first derivatives and the fundamental tensor are
/// analytic.
class EllipticZermelo final : public FinslerMetric {
 public:
  explicit EllipticZermelo(EllipticZermeloParams params, std::string label = "elliptic");

  std::string label() const override { return label_; }
  double F(double t, const Vec2& x, const Vec2& v) const override;
  void first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt, Vec2& dF_dx,
                         Vec2& dF_dv) const override;
  Mat2 fundamental_tensor(double t, const Vec2& x, const Vec2& v) const override;

  const EllipticZermeloParams& params() const { return params_; }

  /// Drift vector W(t, x).
  Vec2 drift(double t, const Vec2& x) const;
  /// Indicatrix point W + Rot(-theta)·(a cos φ, b sin φ).
  Vec2 indicatrix_point(double t, const Vec2& x, double phi) const;

 private:
  struct Data;  // evaluated fields plus h, W, Λ and their q-derivatives
  Data data(double t, const Vec2& x) const;

  EllipticZermeloParams params_;
  std::string label_;
};

/// F(params; t, x, v) without keeping a metric object around.
double eval_elliptic_F(const EllipticZermeloParams& params, double t, const Vec2& x,
                       const Vec2& v);

}  // namespace zermelo
