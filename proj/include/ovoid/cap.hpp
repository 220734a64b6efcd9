#pragma once

#include "ovoid/elliptic.hpp"

#include <functional>

namespace ovoid {

/// Dirichlet problem F^{ij}(u_ij + u delta_ij) = 0 on a geodesic cap in
/// standard position (center = north pole), u = g on the boundary circle.
/// The cap must stay strictly inside the open upper hemisphere so the
/// substitution u = x3 * v is available; the solver works on the reduced
/// drift equation F^{ij} v_ij + b_k v_k = 0 (no zeroth-order term), with
/// b_k = -(2 sin(theta)/cos(theta)) F^{1k} from (x3)_ij = -x3 delta_ij.
struct CapProblem {
  GridPtr grid;
  Vec3 center = Vec3(0.0, 0.0, 1.0); // only the standard position is supported
  double radius = 0.5;               // radians, < pi/2
  std::function<double(const Vec3&)> boundary_u;
  CoefficientField coeff;
};

struct CapSolution {
  GridPtr grid;
  double radius = 0.0;
  int n_rings = 0;                 // interior rings (theta < radius)
  std::vector<int> interior_nodes; // global node indices, ring-major
  Eigen::VectorXd v;               // reduced unknown at interior nodes
  Eigen::VectorXd u;               // x3 * v
  Eigen::VectorXd boundary_v;      // at (radius, phi_j)
  Eigen::VectorXd boundary_u_vals;
  double pde_residual_max = 0.0;      // residual of the original u-equation
  double boundary_max_error = 0.0;    // collocation mismatch
  double reduced_residual_max = 0.0;  // residual of the solved drift equation

  /// Interpolated solution u at (theta, phi) inside the cap.
  double evaluate_u(double theta, double phi) const;
  double evaluate_v(double theta, double phi) const;

  // interpolation support
  std::vector<double> ring_theta; // interior ring colatitudes
};

CapSolution solve_cap_dirichlet(const CapProblem& p);

/// Global spectral check of the reduction identity
///   F^{ij}((x3 v)_ij + x3 v delta_ij) = x3 (F^{ij} v_ij + b_k v_k)
/// for a band-limited v, over nodes with x3 >= x3_min.  Returns the max
/// absolute mismatch.
double substitution_identity_residual(const CoefficientField& F,
                                      const ScalarField& v, double x3_min = 0.2);

} // namespace ovoid
