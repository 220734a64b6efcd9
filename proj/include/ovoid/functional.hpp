#pragma once

#include "ovoid/body.hpp"

#include <functional>
#include <string>

namespace ovoid {

/// Curvature functional f(y1, y2) with partials; y are principal curvatures,
/// slot 1 the larger one.  Induces F(W) = f(1/lambda1(W), 1/lambda2(W)) on
/// positive definite W.
struct CurvatureFunctional {
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double, double)> df1;
  std::function<double(double, double)> df2;
  bool symmetric = false;
  // Validity box for (y1, y2); defaults to all positive curvature pairs.
  double y_min = 0.0;
  double y_max = std::numeric_limits<double>::infinity();
};

/// Registry lookup: "mean", "gauss", "weighted:a,b", "power:p".
CurvatureFunctional functional_by_name(const std::string& spec);

/// Samples the monotonicity hypothesis df1*df2 > 0 over the validity box.
bool check_monotonicity(const CurvatureFunctional& f, int samples = 64);

/// Coefficient field F^{ij}(x) with measured ellipticity pair.  When the raw
/// secant/derivative field is negative definite (functionals decreasing in W)
/// it is stored negated so lambda > 0; `negated` records that.
struct CoefficientField {
  GridPtr grid;
  Eigen::VectorXd f11, f12, f22;
  double lambda = 0.0;
  double Lambda = 0.0;
  bool negated = false;
  bool uniformly_elliptic = false;
  std::string provenance;
  /// Optional analytic covariant derivative: fills dF[k] = F_{ij;k}.
  std::function<void(int node, Mat2 dF[2])> derivative;

  Mat2 at(int node) const {
    Mat2 m;
    m << f11[node], f12[node], f12[node], f22[node];
    return m;
  }
  bool has_derivative() const { return static_cast<bool>(derivative); }
};

/// Principal radii: eigenvalues of W, lambda1 <= lambda2, via the closed-form
/// sigma1/sigma2 expressions (evaluated with the cancellation-free discriminant
/// (w11-w22)^2 + 4 w12^2, which equals sigma1^2 - 4 sigma2 exactly).
std::pair<double, double> principal_radii(const Mat2& W);

/// kappa1 >= kappa2 > 0; throws for non-positive-definite W.
std::pair<double, double> principal_curvatures(const Mat2& W);

double evaluate_functional(const CurvatureFunctional& f, const Mat2& W);

/// dF/dW as a symmetric matrix (full-matrix gradient); umbilic selection for
/// non-symmetric f is the symmetrized derivative.
Mat2 functional_derivative(const CurvatureFunctional& f, const Mat2& W);

inline constexpr int kDefaultSecantNodes = 16;

/// Nodewise Gauss-Legendre secant coefficients between two Hessian fields.
CoefficientField coefficient_field_secant(const CurvatureFunctional& f,
                                          const SymMatrixField& W1,
                                          const SymMatrixField& W2,
                                          int quadrature_nodes = kDefaultSecantNodes);

/// Re-measure (lambda, Lambda) of a coefficient field.
std::pair<double, double> ellipticity_constants(const CoefficientField& F);

/// Constant-coefficient field c * I (identity Laplace-type problem).
CoefficientField identity_coefficients(GridPtr grid, double c = 1.0);

/// Registry of smooth variable coefficient fields with analytic covariant
/// derivatives: "const:c", "scalar:p" (F = (1 + p x3) I), "tangent:gamma"
/// (F = I + gamma a (x) a with a the tangential part of the x-axis direction).
CoefficientField coefficient_field_by_name(GridPtr grid, const std::string& spec);

/// Random W with F^{ij} W_ij = 0 (W11, W12 uniform in [-1,1], W22 solved).
Mat2 null_solution_sample(const Mat2& F, std::uint64_t seed);
Mat2 null_solution_from(const Mat2& F, double w11, double w12);

struct LemmaDetReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// |W|^2 <= -(2 Lambda / lambda) det W for null pairs.
LemmaDetReport lemma_det_check(const Mat2& F, const Mat2& W, double lambda,
                               double Lambda);

struct ConditionReport {
  ScalarField residual;      // F(W_{u1}) - F(W_{u2}) nodewise
  double max_abs = 0.0;
};

ConditionReport check_condition(const CurvatureFunctional& f, const SupportBody& b1,
                                const SupportBody& b2);

} // namespace ovoid
