#include "zermelo/elliptic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zermelo {

ScalarField field_constant(double value) {
  return [value](double, double, double) { return FieldEval{value, 0.0, 0.0, 0.0}; };
}

ScalarField field_from(const Expression& e) {
  return [e](double t, double x, double y) { return e.eval(t, x, y); };
}

EllipticZermeloParams EllipticZermeloParams::constants(double a, double b, double c1, double c2,
                                                       double theta) {
  return {field_constant(a), field_constant(b), field_constant(c1), field_constant(c2),
          field_constant(theta)};
}

EllipticZermeloParams EllipticZermeloParams::from_expressions(const Expression& a,
                                                              const Expression& b,
                                                              const Expression& c1,
                                                              const Expression& c2,
                                                              const Expression& theta) {
  return {field_from(a), field_from(b), field_from(c1), field_from(c2), field_from(theta)};
}

namespace {

// One coefficient field evaluation split into value and the three partials.
struct Coef {
  double v;
  double d[3];  // ∂/∂t, ∂/∂x, ∂/∂y
};

Coef coef(const ScalarField& f, double t, double x, double y) {
  const FieldEval e = f(t, x, y);
  return {e.v, {e.dt, e.dx, e.dy}};
}

}  // namespace

struct EllipticZermelo::Data {
  Mat2 h;
  Vec2 W;
  double lambda;
  Mat2 dh[3];
  Vec2 dW[3];
  double dlambda[3];
};

EllipticZermelo::EllipticZermelo(EllipticZermeloParams params, std::string label)
    : params_(std::move(params)), label_(std::move(label)) {
  if (!params_.a || !params_.b || !params_.c1 || !params_.c2 || !params_.theta)
    throw std::invalid_argument("elliptic: all five coefficient fields are required");
}

EllipticZermelo::Data EllipticZermelo::data(double t, const Vec2& x) const {
  const Coef a = coef(params_.a, t, x.x(), x.y());
  const Coef b = coef(params_.b, t, x.x(), x.y());
  const Coef c1 = coef(params_.c1, t, x.x(), x.y());
  const Coef c2 = coef(params_.c2, t, x.x(), x.y());
  const Coef th = coef(params_.theta, t, x.x(), x.y());

  if (!(a.v > 0.0) || !(b.v > 0.0)) {
    std::ostringstream os;
    os << "elliptic: semi-axes must be positive; a = " << a.v << ", b = " << b.v << " at t = "
       << t << ", x = (" << x.x() << ", " << x.y() << ")";
    throw std::domain_error(os.str());
  }
  const double drift2 = (c1.v / a.v) * (c1.v / a.v) + (c2.v / b.v) * (c2.v / b.v);
  if (!(drift2 < 1.0)) {
    std::ostringstream os;
    os << "elliptic: drift exceeds self-propulsion, (c1/a)^2 + (c2/b)^2 = " << drift2
       << " >= 1 at t = " << t << ", x = (" << x.x() << ", " << x.y() << ")";
    throw std::domain_error(os.str());
  }

  const double ct = std::cos(th.v), st = std::sin(th.v);
  Mat2 R;
  R << ct, -st, st, ct;
  Mat2 Rp;  // dR/dθ
  Rp << -st, -ct, ct, -st;
  Mat2 D = Mat2::Zero();
  D(0, 0) = 1.0 / (a.v * a.v);
  D(1, 1) = 1.0 / (b.v * b.v);
  const Vec2 c(c1.v, c2.v);

  Data d;
  d.h = R.transpose() * D * R;
  d.W = R.transpose() * c;
  // Λ = 1 − WᵀhW = 1 − (c1/a)² − (c2/b)²
  d.lambda = 1.0 - drift2;

  for (int q = 0; q < 3; ++q) {
    Mat2 dD = Mat2::Zero();
    dD(0, 0) = -2.0 * a.d[q] / (a.v * a.v * a.v);
    dD(1, 1) = -2.0 * b.d[q] / (b.v * b.v * b.v);
    const Mat2 dR = th.d[q] * Rp;
    const Vec2 dc(c1.d[q], c2.d[q]);
    d.dh[q] = dR.transpose() * D * R + R.transpose() * dD * R + R.transpose() * D * dR;
    d.dW[q] = dR.transpose() * c + R.transpose() * dc;
    d.dlambda[q] = -(2.0 * d.dW[q].dot(d.h * d.W) + d.W.dot(d.dh[q] * d.W));
  }
  return d;
}

double EllipticZermelo::F(double t, const Vec2& x, const Vec2& v) const {
  require_nonzero(v);
  const Data d = data(t, x);
  const double om = -v.dot(d.h * d.W);
  const double Q = std::sqrt(d.lambda * v.dot(d.h * v) + om * om);
  return (om + Q) / d.lambda;
}

void EllipticZermelo::first_derivatives(double t, const Vec2& x, const Vec2& v, double& dF_dt,
                                        Vec2& dF_dx, Vec2& dF_dv) const {
  require_nonzero(v);
  const Data d = data(t, x);
  const Vec2 omv = -(d.h * d.W);
  const double om = omv.dot(v);
  const double S = v.dot(d.h * v);
  const double Q = std::sqrt(d.lambda * S + om * om);
  const double F0 = (om + Q) / d.lambda;

  double dq[3];
  for (int q = 0; q < 3; ++q) {
    const Vec2 domv = -(d.dh[q] * d.W + d.h * d.dW[q]);
    const double dom = domv.dot(v);
    const double dS = v.dot(d.dh[q] * v);
    const double dQ = (d.dlambda[q] * S + d.lambda * dS + 2.0 * om * dom) / (2.0 * Q);
    dq[q] = ((dom + dQ) - F0 * d.dlambda[q]) / d.lambda;
  }
  dF_dt = dq[0];
  dF_dx = Vec2(dq[1], dq[2]);

  const Vec2 Qv = (d.lambda * (d.h * v) + om * omv) / Q;
  dF_dv = (omv + Qv) / d.lambda;
}

Mat2 EllipticZermelo::fundamental_tensor(double t, const Vec2& x, const Vec2& v) const {
  require_nonzero(v);
  const Data d = data(t, x);
  const Vec2 omv = -(d.h * d.W);
  const double om = omv.dot(v);
  const double Q = std::sqrt(d.lambda * v.dot(d.h * v) + om * om);
  const Vec2 Qv = (d.lambda * (d.h * v) + om * omv) / Q;
  const Mat2 Qvv =
      (d.lambda * d.h + omv * omv.transpose()) / Q - (Qv * Qv.transpose()) / Q;
  const Vec2 g = omv + Qv;
  return (g * g.transpose() + (om + Q) * Qvv) / (d.lambda * d.lambda);
}

Vec2 EllipticZermelo::drift(double t, const Vec2& x) const { return data(t, x).W; }

Vec2 EllipticZermelo::indicatrix_point(double t, const Vec2& x, double phi) const {
  const Coef a = coef(params_.a, t, x.x(), x.y());
  const Coef b = coef(params_.b, t, x.x(), x.y());
  const Coef th = coef(params_.theta, t, x.x(), x.y());
  const double ct = std::cos(th.v), st = std::sin(th.v);
  Mat2 R;
  R << ct, -st, st, ct;
  return data(t, x).W + R.transpose() * Vec2(a.v * std::cos(phi), b.v * std::sin(phi));
}

double eval_elliptic_F(const EllipticZermeloParams& params, double t, const Vec2& x,
                       const Vec2& v) {
  return EllipticZermelo(params).F(t, x, v);
}

}  // namespace zermelo
