#pragma once

#include "ovoid/grid.hpp"
#include "ovoid/sht.hpp"

#include <optional>

namespace ovoid {

/// Scalar field on a grid.  `coeffs` (when present) is the band-limited
/// representation; nodal values and coefficient synthesis agree to scheme
/// tolerance by construction everywhere the library creates both.
struct ScalarField {
  GridPtr grid;
  Eigen::VectorXd values;
  std::optional<Eigen::VectorXd> coeffs;

  bool has_coeffs() const { return coeffs.has_value(); }
};

/// Tangent vector field, components in the grid's declared frame.
struct TangentField {
  GridPtr grid;
  Eigen::VectorXd c1, c2;

  Vec2 at(int node) const { return Vec2(c1[node], c2[node]); }
};

/// Symmetric 2x2 matrix field in the grid's declared frame.
struct SymMatrixField {
  GridPtr grid;
  Eigen::VectorXd m11, m12, m22;

  Mat2 at(int node) const {
    Mat2 m;
    m << m11[node], m12[node], m12[node], m22[node];
    return m;
  }
  void set(int node, const Mat2& m) {
    m11[node] = m(0, 0);
    m12[node] = 0.5 * (m(0, 1) + m(1, 0));
    m22[node] = m(1, 1);
  }
};

/// Third covariant derivatives of a scalar (equivalently the covariant
/// derivative of its Hessian): T_{ij;k}, symmetric in (i,j).
struct ThirdDerivField {
  GridPtr grid;
  // index [k][ij] with ij in {0:11, 1:12, 2:22}, k in {0:;1, 1:;2}
  Eigen::VectorXd t[2][3];
};

ScalarField make_field(GridPtr grid, Eigen::VectorXd values);
ScalarField make_field_from_coeffs(GridPtr grid, Eigen::VectorXd coeffs);

/// Analysis wrapper: returns a copy carrying band-limited coefficients.
ScalarField with_coeffs(const ScalarField& u);

/// Coefficients of u, computing them if absent.
Eigen::VectorXd coeffs_of(const ScalarField& u);

/// First covariant derivative u_i in the grid frame (spectral).
TangentField covariant_gradient(const ScalarField& u);

/// Second covariant derivative u_ij in the grid frame (spectral).
SymMatrixField covariant_hessian(const ScalarField& u);

/// Gradient, Hessian and third covariant derivatives in one pass.
struct DerivativeBundle {
  TangentField grad;
  SymMatrixField hess;
  ThirdDerivField third;
};
DerivativeBundle covariant_derivatives3(const ScalarField& u);

Eigen::VectorXd laplace_beltrami(const ScalarField& u);

/// L2 norm and max-abs of a nodal array under the grid quadrature.
double l2_norm(const Grid& grid, const Eigen::VectorXd& values);

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* who);

} // namespace ovoid
