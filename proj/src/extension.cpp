#include "ovoid/extension.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ovoid {

double HomogeneousExtension::operator()(const Vec3& X) const {
  const double r = X.norm();
  if (r == 0.0)
    throw std::invalid_argument("HomogeneousExtension: undefined at the origin");
  const double theta = std::acos(std::clamp(X[2] / r, -1.0, 1.0));
  const double phi = std::atan2(X[1], X[0]);
  double val;
  evaluate_point(grid->L, coeffs, theta, phi, 0, &val);
  return r * val;
}

HomogeneousExtension homogeneous_extension(const ScalarField& u) {
  HomogeneousExtension ext;
  ext.grid = u.grid;
  ext.coeffs = coeffs_of(u);
  return ext;
}

RadialNullReport radial_null_check(const ScalarField& u,
                                   const std::vector<Vec3>& sample_points,
                                   double fd_step) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("radial_null_check: fd_step");
  HomogeneousExtension v = homogeneous_extension(u);
  Eigen::VectorXd uc = v.coeffs;
  const int L = u.grid->L;

  RadialNullReport rep;
  rep.fd_step = fd_step;
  rep.samples.reserve(sample_points.size());
  const double h = fd_step;
  for (const Vec3& X : sample_points) {
    const double r = X.norm();
    if (r == 0.0) throw std::invalid_argument("radial_null_check: sample at origin");
    // Central second differences of v.
    Eigen::Matrix3d H;
    const double v0 = v(X);
    for (int a = 0; a < 3; ++a) {
      Vec3 ea = Vec3::Zero();
      ea[a] = h;
      H(a, a) = (v(X + ea) - 2.0 * v0 + v(X - ea)) / (h * h);
      for (int b = a + 1; b < 3; ++b) {
        Vec3 eb = Vec3::Zero();
        eb[b] = h;
        const double m =
            (v(X + ea + eb) - v(X + ea - eb) - v(X - ea + eb) + v(X - ea - eb)) /
            (4.0 * h * h);
        H(a, b) = m;
        H(b, a) = m;
      }
    }
    RadialNullSample s;
    s.X = X;
    const double hn = std::max(1.0, H.norm());
    s.radial_residual = (H * X).norm() / (r * hn);

    // Spherical Hessian eigenvalues at the direction X/|X| via point partials.
    const double theta = std::acos(std::clamp(X[2] / r, -1.0, 1.0));
    const double phi = std::atan2(X[1], X[0]);
    double d[kNumPartialSlots];
    evaluate_point(L, uc, theta, phi, 2, d);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double is = 1.0 / st, is2 = is * is;
    Mat2 W;
    W(0, 0) = d[D_TT] + d[D_V];
    W(0, 1) = W(1, 0) = d[D_TP] * is - ct * is2 * d[D_P];
    W(1, 1) = d[D_PP] * is2 + ct * is * d[D_T] + d[D_V];
    Eigen::SelfAdjointEigenSolver<Mat2> ws(W);

    // Nonradial eigenvalues of |X| Hess(v): drop the (near-)null radial one.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> hs(r * H);
    Eigen::Vector3d ev = hs.eigenvalues();
    int radial = 0;
    double best = -1.0;
    for (int k = 0; k < 3; ++k) {
      const double align = std::abs(hs.eigenvectors().col(k).dot(X)) / r;
      if (align > best) {
        best = align;
        radial = k;
      }
    }
    Eigen::Vector2d rest;
    for (int k = 0, t = 0; k < 3; ++k)
      if (k != radial) rest[t++] = ev[k];
    if (rest[0] > rest[1]) std::swap(rest[0], rest[1]);
    s.eigenvalue_mismatch = (rest - ws.eigenvalues()).cwiseAbs().maxCoeff();

    rep.max_radial_residual = std::max(rep.max_radial_residual, s.radial_residual);
    rep.max_eigenvalue_mismatch =
        std::max(rep.max_eigenvalue_mismatch, s.eigenvalue_mismatch);
    rep.samples.push_back(s);
  }
  return rep;
}

} // namespace ovoid
