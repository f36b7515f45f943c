#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

namespace zermelo {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Pointwise data of a time/position-dependent Minkowski norm F(t, x, v),
/// evaluated at one (t, x, v) with v != 0.
struct FinslerJet {
  double F0 = 0.0;              ///< F(t, x, v)
  double dF_dt = 0.0;           ///< ∂F/∂t
  Vec2 dF_dx = Vec2::Zero();    ///< ∂F/∂x
  Vec2 dF_dv = Vec2::Zero();    ///< ∂F/∂v
  Mat2 G = Mat2::Zero();        ///< fundamental tensor, ½ ∂²(F²)/∂v∂v
  Mat2 xi_form = Mat2::Zero();  ///< ∂G/∂t
  double xi = 0.0;              ///< contracted form vᵀ (∂G/∂t) v at the base v
  Vec2 nu = Vec2::Zero();       ///< ∇_x (vᵀ G v)
  Vec2 zeta = Vec2::Zero();     ///< ∇_y (vᵀ G(t,x,y) v) |_{y=v}
};

/// A tangent vector of the product spacetime R_t × R².
struct SpacetimeVector {
  double v0 = 0.0;
  Vec2 v = Vec2::Zero();
};

enum class Causal {
  kTimelikeFuture,
  kTimelikePast,
  kLightlikeFuture,
  kLightlikePast,
  kSpacelike,
};

const char* to_string(Causal c);

/// Abstract positive-homogeneous metric F(t, x, v) with analytic first
/// derivatives.  Second derivatives (the fundamental tensor) default to
/// central finite differences of the analytic gradient with step
/// h = 1e-5·max(1, |v|); subclasses with closed forms override.
class FinslerMetric {
 public:
  virtual ~FinslerMetric() = default;

  /// Stable identity label used in reports and CSV/JSON output.
  virtual std::string label() const = 0;

  /// F(t, x, v).  Throws std::domain_error for v = 0.
  virtual double F(double t, const Vec2& x, const Vec2& v) const = 0;

  /// Analytic first derivatives of F at (t, x, v).
  virtual void first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt,
                                 Vec2& dF_dx, Vec2& dF_dv) const = 0;

  /// Fundamental tensor g_ij(t, x, v) = ½ ∂²(F²)/∂vᵢ∂vⱼ.
  virtual Mat2 fundamental_tensor(double t, const Vec2& x, const Vec2& v) const;

 protected:
  static void require_nonzero(const Vec2& v);
};

using MetricPtr = std::shared_ptr<const FinslerMetric>;

/// F(v) = |v|.
class EuclideanMetric final : public FinslerMetric {
 public:
  std::string label() const override { return "euclidean"; }
  double F(double t, const Vec2& x, const Vec2& v) const override;
  void first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt, Vec2& dF_dx,
                         Vec2& dF_dv) const override;
  Mat2 fundamental_tensor(double t, const Vec2& x, const Vec2& v) const override;
};

/// F(x, v) = c(x)·|v| for a positive conformal factor (test metric with
/// exact second derivatives: G = c² I).
class ConformalEuclidean final : public FinslerMetric {
 public:
  /// `c` returns the factor value and its spatial gradient.
  ConformalEuclidean(std::function<double(const Vec2&, Vec2*)> c, std::string label);
  std::string label() const override { return label_; }
  double F(double t, const Vec2& x, const Vec2& v) const override;
  void first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt, Vec2& dF_dx,
                         Vec2& dF_dv) const override;
  Mat2 fundamental_tensor(double t, const Vec2& x, const Vec2& v) const override;

 private:
  std::function<double(const Vec2&, Vec2*)> c_;
  std::string label_;
};

/// Reverse metric F⁻(t, x, v) = F(t, x, −v).
class ReversedMetric final : public FinslerMetric {
 public:
  explicit ReversedMetric(MetricPtr base);
  std::string label() const override { return "reversed(" + base_->label() + ")"; }
  double F(double t, const Vec2& x, const Vec2& v) const override;
  void first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt, Vec2& dF_dx,
                         Vec2& dF_dv) const override;
  Mat2 fundamental_tensor(double t, const Vec2& x, const Vec2& v) const override;
  const MetricPtr& base() const { return base_; }

 private:
  MetricPtr base_;
};

/// Wraps `m` in its reverse; reversing a reversed metric unwraps it.
MetricPtr reverse(const MetricPtr& m);

/// Full jet of F at (t, x, v): value, first derivatives, fundamental
/// tensor, and the contracted second-derivative data used by the
/// pregeodesic solver.  ν uses the exact homogeneity identity
/// ∇_x(vᵀGv) = 2 F ∂F/∂x; ξ and ζ are single central differences of the
/// fundamental tensor (analytic when the metric overrides it).
FinslerJet eval_jet(const FinslerMetric& m, double t, const Vec2& x, const Vec2& v);

/// Causal character of a spacetime vector under H = (v⁰)² − F(t, x, v)².
/// Lightlike within |H| ≤ 1e-12·max((v⁰)², F²); throws on the zero vector.
Causal classify_causal(const FinslerMetric& m, double t, const Vec2& x,
                       const SpacetimeVector& vhat);

}  // namespace zermelo
