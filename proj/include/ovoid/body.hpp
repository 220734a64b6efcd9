#pragma once

#include "ovoid/calculus.hpp"

#include <string>

namespace ovoid {

/// Convex body represented by its support function on the grid.
/// Non-band-limited presets (ellipsoids) are truncated at the grid band
/// limit; `alias_error` records the max deviation between the exact support
/// values and the truncation.
struct SupportBody {
  ScalarField u;
  std::string provenance;
  double alias_error = 0.0;
};

/// Boundary point field X_u(x) = u_1 e_1 + u_2 e_2 + u x (the gradient map).
struct GradientMapField {
  GridPtr grid;
  std::vector<Vec3> points;
};

struct ConvexityReport {
  double min_eig = 0.0;
  int argmin_node = -1;
  int grid_L = 0;
  bool pass = false;
};

enum class PresetKind { Ball, Ellipsoid, HarmonicPerturbedBall };

struct BallParams {
  double radius = 1.0;
  Vec3 center = Vec3::Zero();
};
struct EllipsoidParams {
  double a = 1.0, b = 1.0, c = 1.0;
  Vec3 center = Vec3::Zero();
};
struct HarmonicBallParams {
  double radius = 1.0;
  int degree = 2;
  int order = 0; // -degree..degree, real basis
  double amplitude = 0.0;
  Vec3 center = Vec3::Zero();
};

SupportBody make_ball(GridPtr grid, const BallParams& p);
SupportBody make_ellipsoid(GridPtr grid, const EllipsoidParams& p);
SupportBody make_harmonic_ball(GridPtr grid, const HarmonicBallParams& p);

/// Minkowski sum: support functions add.
SupportBody minkowski_sum(const SupportBody& b1, const SupportBody& b2);

/// t * body for t > 0.
SupportBody scale_body(const SupportBody& b, double t);

/// body + translation (adds the linear support term <a, x>).
SupportBody translate_body(const SupportBody& b, const Vec3& a);

/// W_u = u_ij + u delta_ij.  Applies to arbitrary scalar fields (differences
/// of support functions included).
SymMatrixField spherical_hessian(const ScalarField& u);

/// Nodal min-eigenvalue scan of W_u.
ConvexityReport check_convexity(const ScalarField& u);

GradientMapField gradient_map(const ScalarField& u);

/// rho_u = |X_u|^2 as a nodal field.
ScalarField rho_field(const ScalarField& u);

/// phi_E = <E, X_u>; E must be unit within 1e-10.
ScalarField phi_field(const ScalarField& u, const Vec3& E);

} // namespace ovoid
