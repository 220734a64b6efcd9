#pragma once

#include "ovoid/functional.hpp"

namespace ovoid {

/// Discrete L[u] = F^{ij}(u_ij + u delta_ij).  Input basis: spherical-harmonic
/// coefficients up to the grid band limit (orthonormal, so coefficient vectors
/// carry the L2 inner product); output: residual values at the nodes, scaled
/// by sqrt(quadrature weight) so that singular values are discrete L2 -> L2
/// quantities with a resolution-stable meaning.  The operator is not
/// self-adjoint in general; kernel detection goes through singular values.
struct AssembledOperator {
  GridPtr grid;
  Eigen::MatrixXd weighted; // sqrt(w) * M, size N x n_coeff
  std::string provenance;

  /// Residual values L[u] at the nodes for coefficient input.
  Eigen::VectorXd apply_values(const Eigen::VectorXd& coeffs) const;
};

struct KernelThresholdPolicy {
  // A singular value counts as zero below tau = C * h^2 * sigma_max, with
  // h = sqrt(4 pi / N).  C was calibrated once on the F = I operator at
  // L = 16 (geometric midpoint of the kernel floor and the spectral gap).
  double C = 2.5e-7;
};

struct KernelReport {
  std::vector<double> smallest_singular_values; // first 8, ascending
  double sigma_max = 0.0;
  double threshold = 0.0;
  double policy_C = 0.0;
  int kernel_dim = 0;
  std::vector<Eigen::VectorXd> kernel_coeffs;  // unit L2 norm basis
  double linear_projection_residual = 0.0;     // relative L2 distance to span{x1,x2,x3}
  int grid_L = 0;
};

AssembledOperator assemble_global(const CoefficientField& F);
AssembledOperator assemble_global_serial(const CoefficientField& F);

KernelReport kernel_analysis(const AssembledOperator& op,
                             const KernelThresholdPolicy& policy = {});

struct MollifyReport {
  CoefficientField field;
  double sup_distance = 0.0; // max-entry distance to the input field
};

/// Gaussian spectral filter exp(-l(l+1) eps^2 / 2) applied entrywise, with
/// eigenvalues floored at lambda_min(F)/2 to preserve positivity.
MollifyReport mollify_coefficients(const CoefficientField& F, double eps);

} // namespace ovoid
