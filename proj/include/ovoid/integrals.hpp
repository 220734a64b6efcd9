#pragma once

#include "ovoid/functional.hpp"

namespace ovoid {

struct IntegralReport {
  double area = 0.0;   // integral of det W_u (length^2)
  double volume = 0.0; // (1/3) integral of u det W_u (length^3)
  int grid_L = 0;
};

/// Integral of det W_u over the sphere (surface area for convex bodies).
double area_integral(const SupportBody& b);

/// (1/3) integral of u det W_u (support-function volume formula).
double volume(const SupportBody& b);

IntegralReport integral_report(const SupportBody& b);

/// Integral of the mixed discriminant
///   (1/2)(det(W1 + W2) - det W1 - det W2),
/// symmetric and bilinear; equals area for b1 = b2.
double mixed_discriminant_integral(const SupportBody& b1, const SupportBody& b2);

/// Quadratic-bound certificate for the difference u = u1 - u2 under a shared
/// curvature condition.  With the secant ellipticity pair (lambda, Lambda) and
/// u~ = u1 + u2, the chain is:
///   pointwise  |W_u|^2 <= -(2 Lambda / lambda) det W_u   (margin1)
///   pointwise  -det W_u <= det W_u~  (sign-corrected comparison, margin2;
///              the literal det W_u <= det W_u~ margin is reported alongside)
///   integrated integral |W_u|^2 <= (2 Lambda / lambda) integral det W_u~,
/// the right side expanding to area(b1) + area(b2) + 2 mixed(b1, b2).
struct W22Certificate {
  double condition_residual = 0.0;
  double lambda = 0.0, Lambda = 0.0;
  double margin1 = 0.0;          // min of -(2L/l) det W_u - |W_u|^2
  double margin2 = 0.0;          // min of det W_u~ + det W_u
  double margin2_literal = 0.0;  // min of det W_u~ - det W_u (paper's literal form)
  double integral_w2 = 0.0;      // integral |W_u|^2
  double integral_det_sum = 0.0; // integral det W_u~
  double integral_margin = 0.0;  // (2L/l) integral_det_sum - integral_w2
  bool pass_pointwise = false;
  bool pass_integral = false;
};

W22Certificate w22_certificate(const SupportBody& b1, const SupportBody& b2,
                               const CurvatureFunctional& f,
                               double tol_condition = 1e-8, double margin_tol = 1e-10);

} // namespace ovoid
