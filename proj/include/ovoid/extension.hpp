#pragma once

#include "ovoid/functional.hpp"

namespace ovoid {

/// Degree-1 homogeneous extension v(X) = |X| u(X/|X|) of a spherical field,
/// evaluated spectrally from the field's coefficients.
struct HomogeneousExtension {
  GridPtr grid;
  Eigen::VectorXd coeffs;

  double operator()(const Vec3& X) const; // throws on X = 0
};

HomogeneousExtension homogeneous_extension(const ScalarField& u);

/// Per-sample diagnostics of the extension's Euclidean Hessian.
struct RadialNullSample {
  Vec3 X;
  double radial_residual = 0.0;     // |Hess(v) X| / max(1, |Hess(v)|)
  double eigenvalue_mismatch = 0.0; // nonradial eigenvalues of |X| Hess(v)
                                    // vs eigenvalues of the spherical Hessian
};

struct RadialNullReport {
  std::vector<RadialNullSample> samples;
  double max_radial_residual = 0.0;
  double max_eigenvalue_mismatch = 0.0;
  double fd_step = 0.0;
};

/// Central finite-difference Hessian of v at each sample point; verifies that
/// X is a null direction and that the remaining two eigenvalues of |X| Hess(v)
/// match the eigenvalues of W_u at X/|X|.
RadialNullReport radial_null_check(const ScalarField& u,
                                   const std::vector<Vec3>& sample_points,
                                   double fd_step = 1e-4);

} // namespace ovoid
