#include "ovoid/integrals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ovoid {

namespace {

Eigen::VectorXd det_values(const SymMatrixField& W) {
  const int N = static_cast<int>(W.m11.size());
  Eigen::VectorXd d(N);
  for (int n = 0; n < N; ++n)
    d[n] = W.m11[n] * W.m22[n] - W.m12[n] * W.m12[n];
  return d;
}

} // namespace

double area_integral(const SupportBody& b) {
  SymMatrixField W = spherical_hessian(b.u);
  return integrate(*b.u.grid, det_values(W));
}

double volume(const SupportBody& b) {
  SymMatrixField W = spherical_hessian(b.u);
  return integrate(*b.u.grid, b.u.values.cwiseProduct(det_values(W))) / 3.0;
}

IntegralReport integral_report(const SupportBody& b) {
  IntegralReport rep;
  rep.area = area_integral(b);
  rep.volume = volume(b);
  rep.grid_L = b.u.grid->L;
  return rep;
}

double mixed_discriminant_integral(const SupportBody& b1, const SupportBody& b2) {
  require_same_grid(b1.u.grid, b2.u.grid, "mixed_discriminant_integral");
  SymMatrixField W1 = spherical_hessian(b1.u);
  SymMatrixField W2 = spherical_hessian(b2.u);
  const Grid& g = *b1.u.grid;
  Eigen::VectorXd mixed(g.size());
  for (int n = 0; n < g.size(); ++n) {
    // polarization of det: (1/2)(det(A+B) - det A - det B)
    //                    = (1/2)(a11 b22 + a22 b11 - 2 a12 b12)
    mixed[n] = 0.5 * (W1.m11[n] * W2.m22[n] + W1.m22[n] * W2.m11[n] -
                      2.0 * W1.m12[n] * W2.m12[n]);
  }
  return integrate(g, mixed);
}

W22Certificate w22_certificate(const SupportBody& b1, const SupportBody& b2,
                               const CurvatureFunctional& f, double tol_condition,
                               double margin_tol) {
  require_same_grid(b1.u.grid, b2.u.grid, "w22_certificate");
  const Grid& g = *b1.u.grid;
  ConditionReport cond = check_condition(f, b1, b2);
  W22Certificate cert;
  cert.condition_residual = cond.max_abs;
  if (cond.max_abs > tol_condition)
    throw std::runtime_error("w22_certificate: curvature condition residual " +
                             std::to_string(cond.max_abs) + " exceeds " +
                             std::to_string(tol_condition));

  SymMatrixField W1 = spherical_hessian(b1.u);
  SymMatrixField W2 = spherical_hessian(b2.u);
  CoefficientField F = coefficient_field_secant(f, W1, W2);
  cert.lambda = F.lambda;
  cert.Lambda = F.Lambda;
  const double ratio = 2.0 * F.Lambda / F.lambda;

  Eigen::VectorXd w2(g.size()), det_u(g.size()), det_sum(g.size());
  double m1 = std::numeric_limits<double>::infinity();
  double m2 = m1, m2lit = m1;
  for (int n = 0; n < g.size(); ++n) {
    const Mat2 Wu = W1.at(n) - W2.at(n);
    const Mat2 Ws = W1.at(n) + W2.at(n);
    w2[n] = Wu.squaredNorm();
    det_u[n] = Wu.determinant();
    det_sum[n] = Ws.determinant();
    m1 = std::min(m1, -ratio * det_u[n] - w2[n]);
    m2 = std::min(m2, det_sum[n] + det_u[n]);
    m2lit = std::min(m2lit, det_sum[n] - det_u[n]);
  }
  cert.margin1 = m1;
  cert.margin2 = m2;
  cert.margin2_literal = m2lit;
  cert.integral_w2 = integrate(g, w2);
  cert.integral_det_sum = integrate(g, det_sum);
  cert.integral_margin = ratio * cert.integral_det_sum - cert.integral_w2;
  cert.pass_pointwise = m1 >= -margin_tol && m2 >= -margin_tol;
  cert.pass_integral = cert.integral_margin >= -margin_tol;
  return cert;
}

} // namespace ovoid
