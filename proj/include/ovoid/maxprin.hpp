#pragma once

#include "ovoid/functional.hpp"

namespace ovoid {

/// Two-sided check of the second-derivative identity for rho_u = |X_u|^2:
///   (1/2) F^{ij} (rho_u)_ij = F^{ij}(WW)_ij + u_k F^{ij} W_ijk - u F^{ij} W_ij
/// valid for ANY u (the last term drops only on solutions), plus the
/// first-derivative identity grad(rho_u) = 2 W grad(u).  The left side goes
/// through a fresh analysis of the nodal rho field, so u must be band-limited
/// well below the grid limit for the product rho to be representable.
struct RhoIdentityReport {
  ScalarField residual;          // LHS - RHS nodewise
  double max_abs = 0.0;
  double gradient_max_abs = 0.0; // max component mismatch of the gradient identity
};

RhoIdentityReport identity_check_rho(const ScalarField& u, const CoefficientField& F);

/// Same two-route check for phi_E = <E, X_u>.  Tier A holds for any u:
///   F^{ij} (phi_E)_ij = <E, e_k> F^{ij} W_ijk - <E, x> F^{ij} W_ij.
/// Tier B is the on-equation form -<E, e_k> F^{ij}_{;k} W_ij; it needs the
/// field's analytic derivative and is only meaningful when F^{ij} W_ij ~ 0,
/// so its residual is bounded by the equation residual times coefficient
/// norms rather than by scheme tolerance.
struct PhiIdentityReport {
  ScalarField residual_a;
  double max_abs_a = 0.0;
  bool has_tier_b = false;
  ScalarField residual_b;
  double max_abs_b = 0.0;
  double gradient_max_abs = 0.0; // grad(phi_E) = W . <E, e_k>
};

PhiIdentityReport identity_check_phi(const ScalarField& u, const CoefficientField& F,
                                     const Vec3& E);

enum class LowerBoundTarget { rho, phi };

/// Differential inequality F^{ij} g_ij >= -C |grad g| for g = rho_u or phi_E,
/// valid on solutions at points where W is non-degenerate.  C comes from the
/// cofactor bound |W|^2 <= (2 Lambda / lambda) |det W| as
/// C = (2 Lambda / lambda) * max_nodes |grad F| (Frobenius over all i, j, k);
/// F must carry an analytic derivative.  Nodes with
/// |det W| <= cutoff * |W|^2 are excluded and counted.  The contraction
/// F^{ij} g_ij is evaluated in its on-equation form (third derivatives of u
/// traded for coefficient derivatives by differentiating F^{ij} W_ij = 0),
/// so the precondition that u solves the equation is essential.
struct LowerBoundReport {
  double C = 0.0;          // derived constant, 0 for constant coefficients
  double min_margin = 0.0; // min over admissible nodes of F^{ij} g_ij + C |grad g|
  int admissible_nodes = 0;
  int excluded_nodes = 0;
  double degeneracy_cutoff = 0.0;
  bool pass = false; // min_margin >= -tolerance
};

inline constexpr double kDegeneracyCutoff = 1e-8;

LowerBoundReport lower_bound_check(const ScalarField& u, const CoefficientField& F,
                                   LowerBoundTarget which, const Vec3& E = Vec3::UnitZ(),
                                   double tolerance = 1e-6);

/// Near-maximum node set of a scalar field with grid-adjacency components.
/// Isolation is a grid-granularity statement: the tolerance widens the set,
/// and a single resolution cannot certify the continuum property.
struct MaxSetReport {
  double max_value = 0.0;
  double tolerance = 0.0; // absolute, applied as value >= max - tolerance
  std::vector<int> nodes;
  int component_count = 0;
  bool has_isolated_point = false; // some component is a single node
  std::vector<int> component_sizes;
};

/// tol < 0 selects the default 1e-6 * (max - min).
MaxSetReport max_set(const ScalarField& field, double tol = -1.0);

enum class UniquenessVerdict { identical, equal_up_to_translation, hypothesis_violated,
                               inconclusive };

const char* to_string(UniquenessVerdict v);

/// Witness data from the translation construction: p0 maximizes rho_u for
/// u = u1 - u2, E is the gradient-map direction there, and
/// u~ = u - sqrt(max rho) <E, x> should vanish identically when the two
/// bodies differ by a translation.
struct TranslationWitness {
  int p0_node = -1;
  Vec3 p0 = Vec3::Zero();
  Vec3 E = Vec3::Zero();
  double rho_max = 0.0;
  Vec3 translation = Vec3::Zero();   // degree-1 projection of u1 - u2
  double witness_residual = 0.0;     // max |u - <translation, x>|
  double u_tilde_max = 0.0;          // max |u~|
  double grad_norm_on_max_set = 0.0; // max |grad u~| over the phi_E max set
  UniquenessVerdict verdict = UniquenessVerdict::inconclusive;
  ScalarField u_tilde;
};

/// Throws std::runtime_error("hypothesis violated: ...") when the curvature
/// condition F(W_{u1}) = F(W_{u2}) fails beyond tol_condition.
TranslationWitness translation_witness(const SupportBody& b1, const SupportBody& b2,
                                       const CurvatureFunctional& f,
                                       double tol_condition = 1e-8,
                                       double tol_witness = 1e-6);

} // namespace ovoid
