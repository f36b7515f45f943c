#include "zermelo/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace zermelo {

const char* to_string(Causal c) {
  switch (c) {
    case Causal::kTimelikeFuture:
      return "timelike-future";
    case Causal::kTimelikePast:
      return "timelike-past";
    case Causal::kLightlikeFuture:
      return "lightlike-future";
    case Causal::kLightlikePast:
      return "lightlike-past";
    case Causal::kSpacelike:
      return "spacelike";
  }
  return "?";
}

void FinslerMetric::require_nonzero(const Vec2& v) {
  if (v.x() == 0.0 && v.y() == 0.0)
    throw std::domain_error("metric: F is undefined at v = 0");
}

Mat2 FinslerMetric::fundamental_tensor(double t, const Vec2& x, const Vec2& v) const {
  // Central differences of the analytic gradient of ½F²; a single FD layer.
  const double h = 1e-5 * std::max(1.0, v.norm());
  Mat2 g;
  for (int j = 0; j < 2; ++j) {
    Vec2 vp = v, vm = v;
    vp[j] += h;
    vm[j] -= h;
    double dtp, dtm;
    Vec2 dxp, dxm, dvp, dvm;
    first_derivatives(t, x, vp, dtp, dxp, dvp);
    first_derivatives(t, x, vm, dtm, dxm, dvm);
    const Vec2 gp = F(t, x, vp) * dvp;  // ∇_v(½F²) = F ∇_v F
    const Vec2 gm = F(t, x, vm) * dvm;
    g.col(j) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (g + g.transpose());
}

// ---------------------------------------------------------------------------
// Euclidean

double EuclideanMetric::F(double, const Vec2&, const Vec2& v) const {
  require_nonzero(v);
  return v.norm();
}

void EuclideanMetric::first_derivatives(double, const Vec2&, const Vec2& v, double& dF_dt,
                                        Vec2& dF_dx, Vec2& dF_dv) const {
  require_nonzero(v);
  dF_dt = 0.0;
  dF_dx.setZero();
  dF_dv = v.normalized();
}

Mat2 EuclideanMetric::fundamental_tensor(double, const Vec2&, const Vec2& v) const {
  require_nonzero(v);
  return Mat2::Identity();
}

// ---------------------------------------------------------------------------
// Conformal-Euclidean

ConformalEuclidean::ConformalEuclidean(std::function<double(const Vec2&, Vec2*)> c,
                                       std::string label)
    : c_(std::move(c)), label_(std::move(label)) {}

double ConformalEuclidean::F(double, const Vec2& x, const Vec2& v) const {
  require_nonzero(v);
  return c_(x, nullptr) * v.norm();
}

void ConformalEuclidean::first_derivatives(double, const Vec2& x, const Vec2& v, double& dF_dt,
                                           Vec2& dF_dx, Vec2& dF_dv) const {
  require_nonzero(v);
  Vec2 grad;
  const double c = c_(x, &grad);
  dF_dt = 0.0;
  dF_dx = grad * v.norm();
  dF_dv = c * v.normalized();
}

Mat2 ConformalEuclidean::fundamental_tensor(double, const Vec2& x, const Vec2& v) const {
  require_nonzero(v);
  const double c = c_(x, nullptr);
  return c * c * Mat2::Identity();
}

// ---------------------------------------------------------------------------
// Reversal

ReversedMetric::ReversedMetric(MetricPtr base) : base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("reverse: null metric");
}

double ReversedMetric::F(double t, const Vec2& x, const Vec2& v) const {
  return base_->F(t, x, -v);
}

void ReversedMetric::first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt,
                                       Vec2& dF_dx, Vec2& dF_dv) const {
  base_->first_derivatives(t, x, -v, dF_dt, dF_dx, dF_dv);
  dF_dv = -dF_dv;
}

Mat2 ReversedMetric::fundamental_tensor(double t, const Vec2& x, const Vec2& v) const {
  return base_->fundamental_tensor(t, x, -v);
}

MetricPtr reverse(const MetricPtr& m) {
  if (!m) throw std::invalid_argument("reverse: null metric");
  if (auto r = std::dynamic_pointer_cast<const ReversedMetric>(m)) return r->base();
  return std::make_shared<ReversedMetric>(m);
}

// ---------------------------------------------------------------------------
// Jet assembly

FinslerJet eval_jet(const FinslerMetric& m, double t, const Vec2& x, const Vec2& v) {
  FinslerJet jet;
  jet.F0 = m.F(t, x, v);
  m.first_derivatives(t, x, v, jet.dF_dt, jet.dF_dx, jet.dF_dv);
  jet.G = m.fundamental_tensor(t, x, v);

  // ∇_x(vᵀGv) = ∇_x(F²) = 2 F ∂F/∂x, exact by homogeneity.
  jet.nu = 2.0 * jet.F0 * jet.dF_dx;

  const double ht = 1e-5;
  jet.xi_form = (m.fundamental_tensor(t + ht, x, v) - m.fundamental_tensor(t - ht, x, v)) /
                (2.0 * ht);
  jet.xi = v.dot(jet.xi_form * v);

  // ζ_i = ∂/∂y_i (vᵀ G(t,x,y) v) at y = v; one FD layer over G.
  const double hv = 1e-5 * std::max(1.0, v.norm());
  for (int i = 0; i < 2; ++i) {
    Vec2 yp = v, ym = v;
    yp[i] += hv;
    ym[i] -= hv;
    const double qp = v.dot(m.fundamental_tensor(t, x, yp) * v);
    const double qm = v.dot(m.fundamental_tensor(t, x, ym) * v);
    jet.zeta[i] = (qp - qm) / (2.0 * hv);
  }
  return jet;
}

Causal classify_causal(const FinslerMetric& m, double t, const Vec2& x,
                       const SpacetimeVector& vhat) {
  const bool spatial_zero = vhat.v.x() == 0.0 && vhat.v.y() == 0.0;
  if (spatial_zero && vhat.v0 == 0.0)
    throw std::domain_error("classify_causal: zero spacetime vector");
  const double F = spatial_zero ? 0.0 : m.F(t, x, vhat.v);
  const double H = vhat.v0 * vhat.v0 - F * F;
  const double tol = 1e-12 * std::max(vhat.v0 * vhat.v0, F * F);
  if (std::abs(H) <= tol)
    return vhat.v0 > 0.0 ? Causal::kLightlikeFuture : Causal::kLightlikePast;
  if (H > 0.0) return vhat.v0 > 0.0 ? Causal::kTimelikeFuture : Causal::kTimelikePast;
  return Causal::kSpacelike;
}

}  // namespace zermelo
