#include "ovoid/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace ovoid {

namespace {

// Rotate tangent components from the canonical (theta-hat, phi-hat) frame
// into the grid's declared frame (rotation by -alpha of components).
void rotate_vector(const Grid& grid, Eigen::VectorXd& c1, Eigen::VectorXd& c2) {
  if (grid.frame_alpha == 0.0) return;
  const double ca = std::cos(grid.frame_alpha), sa = std::sin(grid.frame_alpha);
  for (int p = 0; p < grid.size(); ++p) {
    const double a = c1[p], b = c2[p];
    c1[p] = ca * a + sa * b;
    c2[p] = -sa * a + ca * b;
  }
}

void rotate_sym(const Grid& grid, Eigen::VectorXd& m11, Eigen::VectorXd& m12,
                Eigen::VectorXd& m22) {
  if (grid.frame_alpha == 0.0) return;
  const double ca = std::cos(grid.frame_alpha), sa = std::sin(grid.frame_alpha);
  Mat2 R;
  R << ca, sa, -sa, ca;
  for (int p = 0; p < grid.size(); ++p) {
    Mat2 m;
    m << m11[p], m12[p], m12[p], m22[p];
    Mat2 r = R * m * R.transpose();
    m11[p] = r(0, 0);
    m12[p] = r(0, 1);
    m22[p] = r(1, 1);
  }
}

void rotate_third(const Grid& grid, ThirdDerivField& T) {
  if (grid.frame_alpha == 0.0) return;
  const double ca = std::cos(grid.frame_alpha), sa = std::sin(grid.frame_alpha);
  const double R[2][2] = {{ca, sa}, {-sa, ca}};
  const int sym[2][2] = {{0, 1}, {1, 2}};
  for (int p = 0; p < grid.size(); ++p) {
    double w[2][2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) w[i][j][k] = T.t[k][sym[i][j]][p];
    double r[2][2][2] = {};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                r[i][j][k] += R[i][a] * R[j][b] * R[k][c] * w[a][b][c];
    for (int k = 0; k < 2; ++k) {
      T.t[k][0][p] = r[0][0][k];
      T.t[k][1][p] = r[0][1][k];
      T.t[k][2][p] = r[1][1][k];
    }
  }
}

} // namespace

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* who) {
  if (a.get() != b.get())
    throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

ScalarField make_field(GridPtr grid, Eigen::VectorXd values) {
  if (values.size() != grid->size())
    throw std::invalid_argument("make_field: size mismatch");
  return ScalarField{std::move(grid), std::move(values), std::nullopt};
}

ScalarField make_field_from_coeffs(GridPtr grid, Eigen::VectorXd coeffs) {
  if (coeffs.size() != grid->n_coeff())
    throw std::invalid_argument("make_field_from_coeffs: coefficient count mismatch");
  Eigen::VectorXd values = synthesize(*grid, coeffs);
  return ScalarField{std::move(grid), std::move(values), std::move(coeffs)};
}

ScalarField with_coeffs(const ScalarField& u) {
  if (u.has_coeffs()) return u;
  ScalarField v = u;
  v.coeffs = analyze(*u.grid, u.values);
  return v;
}

Eigen::VectorXd coeffs_of(const ScalarField& u) {
  if (u.has_coeffs()) return *u.coeffs;
  return analyze(*u.grid, u.values);
}

TangentField covariant_gradient(const ScalarField& u) {
  const Grid& g = *u.grid;
  Partials p = synthesize_partials(g, coeffs_of(u), 1);
  TangentField out{u.grid, Eigen::VectorXd(g.size()), Eigen::VectorXd(g.size())};
  for (int i = 0; i < g.n_theta; ++i) {
    const double is = 1.0 / g.sin_theta[i];
    for (int j = 0; j < g.n_phi; ++j) {
      const int n = g.index(i, j);
      out.c1[n] = p.d[D_T][n];
      out.c2[n] = p.d[D_P][n] * is;
    }
  }
  rotate_vector(g, out.c1, out.c2);
  return out;
}

SymMatrixField covariant_hessian(const ScalarField& u) {
  const Grid& g = *u.grid;
  Partials p = synthesize_partials(g, coeffs_of(u), 2);
  SymMatrixField out{u.grid, Eigen::VectorXd(g.size()), Eigen::VectorXd(g.size()),
                     Eigen::VectorXd(g.size())};
  for (int i = 0; i < g.n_theta; ++i) {
    const double s = g.sin_theta[i], c = g.cos_theta[i];
    const double is = 1.0 / s, is2 = is * is, cot = c * is;
    for (int j = 0; j < g.n_phi; ++j) {
      const int n = g.index(i, j);
      out.m11[n] = p.d[D_TT][n];
      out.m12[n] = p.d[D_TP][n] * is - c * is2 * p.d[D_P][n];
      out.m22[n] = p.d[D_PP][n] * is2 + cot * p.d[D_T][n];
    }
  }
  rotate_sym(g, out.m11, out.m12, out.m22);
  return out;
}

DerivativeBundle covariant_derivatives3(const ScalarField& u) {
  const Grid& g = *u.grid;
  if (g.L < 4)
    throw std::invalid_argument("covariant_derivatives3: resolution too low for third derivatives");
  Partials p = synthesize_partials(g, coeffs_of(u), 3);
  DerivativeBundle out;
  out.grad = TangentField{u.grid, Eigen::VectorXd(g.size()), Eigen::VectorXd(g.size())};
  out.hess = SymMatrixField{u.grid, Eigen::VectorXd(g.size()), Eigen::VectorXd(g.size()),
                            Eigen::VectorXd(g.size())};
  out.third.grid = u.grid;
  for (int k = 0; k < 2; ++k)
    for (int ij = 0; ij < 3; ++ij) out.third.t[k][ij].resize(g.size());

  for (int i = 0; i < g.n_theta; ++i) {
    const double s = g.sin_theta[i], c = g.cos_theta[i];
    const double is = 1.0 / s, is2 = is * is, is3 = is2 * is, cot = c * is;
    for (int j = 0; j < g.n_phi; ++j) {
      const int n = g.index(i, j);
      const double ut = p.d[D_T][n], up = p.d[D_P][n];
      const double utt = p.d[D_TT][n], utp = p.d[D_TP][n], upp = p.d[D_PP][n];
      const double uttt = p.d[D_TTT][n], uttp = p.d[D_TTP][n], utpp = p.d[D_TPP][n],
                   uppp = p.d[D_PPP][n];

      out.grad.c1[n] = ut;
      out.grad.c2[n] = up * is;

      const double h11 = utt;
      const double h12 = utp * is - c * is2 * up;
      const double h22 = upp * is2 + cot * ut;
      out.hess.m11[n] = h11;
      out.hess.m12[n] = h12;
      out.hess.m22[n] = h22;

      // e1 = d/dtheta of the Hessian components (coefficients depend on theta)
      const double e1h11 = uttt;
      const double e1h12 = uttp * is - 2.0 * c * is2 * utp + (is + 2.0 * c * c * is3) * up;
      const double e1h22 = utpp * is2 - 2.0 * c * is3 * upp + cot * utt - is2 * ut;
      // e2 = (1/s) d/dphi
      const double e2h11 = uttp * is;
      const double e2h12 = utpp * is2 - c * is3 * upp;
      const double e2h22 = uppp * is3 + c * is2 * utp;

      // Covariant derivative of the symmetric tensor (Christoffel terms of the
      // orthonormal frame: Gamma^2_{21} = cot, Gamma^1_{22} = -cot).
      out.third.t[0][0][n] = e1h11;
      out.third.t[0][1][n] = e1h12;
      out.third.t[0][2][n] = e1h22;
      out.third.t[1][0][n] = e2h11 - 2.0 * cot * h12;
      out.third.t[1][1][n] = e2h12 + cot * (h11 - h22);
      out.third.t[1][2][n] = e2h22 + 2.0 * cot * h12;
    }
  }
  rotate_vector(g, out.grad.c1, out.grad.c2);
  rotate_sym(g, out.hess.m11, out.hess.m12, out.hess.m22);
  rotate_third(g, out.third);
  return out;
}

Eigen::VectorXd laplace_beltrami(const ScalarField& u) {
  SymMatrixField h = covariant_hessian(u);
  return h.m11 + h.m22;
}

double l2_norm(const Grid& grid, const Eigen::VectorXd& values) {
  Eigen::VectorXd sq = values.array().square();
  return std::sqrt(std::max(0.0, integrate(grid, sq)));
}

} // namespace ovoid
