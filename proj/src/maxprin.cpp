#include "ovoid/maxprin.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ovoid {

namespace {

// W and its Codazzi-symmetric covariant derivative from one derivative pass.
struct SphericalJet {
  TangentField grad;
  SymMatrixField W;
  // Wd[k][ij]: W_{ij;k}, ij in {0:11, 1:12, 2:22}, k in {0, 1}
  Eigen::VectorXd Wd[2][3];
};

SphericalJet spherical_jet(const ScalarField& u) {
  DerivativeBundle db = covariant_derivatives3(u);
  SphericalJet jet;
  jet.grad = db.grad;
  jet.W = db.hess;
  jet.W.m11 += u.values;
  jet.W.m22 += u.values;
  // W_{ij;k} = u_{;ijk} + u_{;k} delta_ij
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXd& uk = (k == 0) ? db.grad.c1 : db.grad.c2;
    jet.Wd[k][0] = db.third.t[k][0] + uk;
    jet.Wd[k][1] = db.third.t[k][1];
    jet.Wd[k][2] = db.third.t[k][2] + uk;
  }
  return jet;
}

// F^{ij} W_{ijk} contracted per node for k = 0, 1.
inline void contract_third(const CoefficientField& F, const SphericalJet& jet, int n,
                           double& c1, double& c2) {
  const double f11 = F.f11[n], f12 = F.f12[n], f22 = F.f22[n];
  c1 = f11 * jet.Wd[0][0][n] + 2.0 * f12 * jet.Wd[0][1][n] + f22 * jet.Wd[0][2][n];
  c2 = f11 * jet.Wd[1][0][n] + 2.0 * f12 * jet.Wd[1][1][n] + f22 * jet.Wd[1][2][n];
}

inline double contract_sym(const CoefficientField& F, const Mat2& M, int n) {
  return F.f11[n] * M(0, 0) + F.f12[n] * (M(0, 1) + M(1, 0)) + F.f22[n] * M(1, 1);
}

} // namespace

RhoIdentityReport identity_check_rho(const ScalarField& u, const CoefficientField& F) {
  require_same_grid(u.grid, F.grid, "identity_check_rho");
  const Grid& g = *u.grid;
  SphericalJet jet = spherical_jet(u);

  // Left side: two covariant derivatives of the nodal rho field.
  ScalarField rho = with_coeffs(rho_field(u));
  SymMatrixField rho_hess = covariant_hessian(rho);
  TangentField rho_grad = covariant_gradient(rho);

  RhoIdentityReport rep;
  rep.residual = make_field(u.grid, Eigen::VectorXd::Zero(g.size()));
  for (int n = 0; n < g.size(); ++n) {
    const Mat2 W = jet.W.at(n);
    const Vec2 du = jet.grad.at(n);
    double c1, c2;
    contract_third(F, jet, n, c1, c2);
    const double lhs = 0.5 * contract_sym(F, rho_hess.at(n), n);
    const double rhs = contract_sym(F, Mat2(W * W), n) + du[0] * c1 + du[1] * c2 -
                       u.values[n] * contract_sym(F, W, n);
    rep.residual.values[n] = lhs - rhs;
    rep.max_abs = std::max(rep.max_abs, std::abs(lhs - rhs));

    const Vec2 gr = rho_grad.at(n);
    const Vec2 pred = 2.0 * (W * du);
    rep.gradient_max_abs =
        std::max(rep.gradient_max_abs, (gr - pred).cwiseAbs().maxCoeff());
  }
  return rep;
}

PhiIdentityReport identity_check_phi(const ScalarField& u, const CoefficientField& F,
                                     const Vec3& E) {
  require_same_grid(u.grid, F.grid, "identity_check_phi");
  if (std::abs(E.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("identity_check_phi: E must be a unit vector");
  const Grid& g = *u.grid;
  SphericalJet jet = spherical_jet(u);

  ScalarField phi = with_coeffs(phi_field(u, E));
  SymMatrixField phi_hess = covariant_hessian(phi);
  TangentField phi_grad = covariant_gradient(phi);

  PhiIdentityReport rep;
  rep.residual_a = make_field(u.grid, Eigen::VectorXd::Zero(g.size()));
  rep.has_tier_b = F.has_derivative();
  if (rep.has_tier_b)
    rep.residual_b = make_field(u.grid, Eigen::VectorXd::Zero(g.size()));
  Mat2 dF[2];
  for (int n = 0; n < g.size(); ++n) {
    const Mat2 W = jet.W.at(n);
    const Vec2 Et(E.dot(g.e1(n)), E.dot(g.e2(n)));
    const double Ex = E.dot(g.nodes[n]);
    double c1, c2;
    contract_third(F, jet, n, c1, c2);
    const double lhs = contract_sym(F, phi_hess.at(n), n);
    const double rhs_a = Et[0] * c1 + Et[1] * c2 - Ex * contract_sym(F, W, n);
    rep.residual_a.values[n] = lhs - rhs_a;
    rep.max_abs_a = std::max(rep.max_abs_a, std::abs(lhs - rhs_a));

    if (rep.has_tier_b) {
      F.derivative(n, dF);
      double rhs_b = 0.0;
      for (int k = 0; k < 2; ++k)
        rhs_b -= Et[k] * (dF[k](0, 0) * W(0, 0) + 2.0 * dF[k](0, 1) * W(0, 1) +
                          dF[k](1, 1) * W(1, 1));
      rhs_b -= Ex * contract_sym(F, W, n);
      rep.residual_b.values[n] = lhs - rhs_b;
      rep.max_abs_b = std::max(rep.max_abs_b, std::abs(lhs - rhs_b));
    }

    const Vec2 gr = phi_grad.at(n);
    const Vec2 pred = W * Et;
    rep.gradient_max_abs =
        std::max(rep.gradient_max_abs, (gr - pred).cwiseAbs().maxCoeff());
  }
  return rep;
}

LowerBoundReport lower_bound_check(const ScalarField& u, const CoefficientField& F,
                                   LowerBoundTarget which, const Vec3& E,
                                   double tolerance) {
  require_same_grid(u.grid, F.grid, "lower_bound_check");
  const Grid& g = *u.grid;
  SphericalJet jet = spherical_jet(u);

  LowerBoundReport rep;
  rep.degeneracy_cutoff = kDegeneracyCutoff;
  if (F.has_derivative()) {
    Mat2 dF[2];
    double worst = 0.0;
    for (int n = 0; n < g.size(); ++n) {
      F.derivative(n, dF);
      worst = std::max(worst,
                       std::sqrt(dF[0].squaredNorm() + dF[1].squaredNorm()));
    }
    rep.C = 2.0 * (F.Lambda / F.lambda) * worst;
  } else {
    throw std::invalid_argument(
        "lower_bound_check: coefficient field has no analytic derivative; the "
        "constant cannot be derived");
  }

  // Absolute floor: a W at the roundoff level of u is degenerate no matter
  // what the relative det test says (the relative test is scale-free).
  const double w_floor = 1e-12 * (1.0 + u.values.cwiseAbs().maxCoeff());

  double min_margin = std::numeric_limits<double>::infinity();
  for (int n = 0; n < g.size(); ++n) {
    const Mat2 W = jet.W.at(n);
    const double det = W.determinant();
    if (W.norm() <= w_floor || std::abs(det) <= kDegeneracyCutoff * W.squaredNorm()) {
      ++rep.excluded_nodes;
      continue;
    }
    ++rep.admissible_nodes;
    const Vec2 du = jet.grad.at(n);
    Mat2 dF[2];
    F.derivative(n, dF);
    auto dFW = [&](int k) {
      return dF[k](0, 0) * W(0, 0) + 2.0 * dF[k](0, 1) * W(0, 1) + dF[k](1, 1) * W(1, 1);
    };
    double contraction, grad_norm;
    if (which == LowerBoundTarget::rho) {
      // On-equation form: F^{ij} W_ij = 0 differentiated trades the third
      // derivatives for coefficient derivatives, so
      //   F^{ij} rho_ij = 2 F^{ij}(WW)_ij - 2 u_k F^{ij}_{;k} W_ij,
      // and grad rho = 2 W grad u.
      contraction =
          2.0 * contract_sym(F, Mat2(W * W), n) - 2.0 * (du[0] * dFW(0) + du[1] * dFW(1));
      grad_norm = (2.0 * (W * du)).norm();
    } else {
      if (std::abs(E.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("lower_bound_check: E must be a unit vector");
      const Vec2 Et(E.dot(g.e1(n)), E.dot(g.e2(n)));
      // On-equation form: F^{ij} (phi_E)_ij = -<E, e_k> F^{ij}_{;k} W_ij.
      contraction = -(Et[0] * dFW(0) + Et[1] * dFW(1));
      grad_norm = (W * Et).norm();
    }
    min_margin = std::min(min_margin, contraction + rep.C * grad_norm);
  }
  if (rep.admissible_nodes == 0)
    throw std::runtime_error("lower_bound_check: W degenerate at every node");
  rep.min_margin = min_margin;
  rep.pass = min_margin >= -tolerance;
  return rep;
}

MaxSetReport max_set(const ScalarField& field, double tol) {
  const Grid& g = *field.grid;
  MaxSetReport rep;
  rep.max_value = field.values.maxCoeff();
  const double min_value = field.values.minCoeff();
  rep.tolerance = (tol >= 0.0) ? tol : 1e-6 * (rep.max_value - min_value);
  std::vector<int> label(g.size(), -1);
  for (int n = 0; n < g.size(); ++n)
    if (field.values[n] >= rep.max_value - rep.tolerance) rep.nodes.push_back(n);
  // BFS over the near-max set; adjacency is ring/longitude neighbors plus the
  // across-pole partner on the first and last rings.
  auto in_set = [&](int n) {
    return field.values[n] >= rep.max_value - rep.tolerance;
  };
  std::vector<int> stack;
  for (int start : rep.nodes) {
    if (label[start] >= 0) continue;
    const int comp = rep.component_count++;
    int size = 0;
    stack.push_back(start);
    label[start] = comp;
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      ++size;
      const int i = g.ring_of(n), j = g.lon_of(n);
      std::vector<int> nbrs;
      nbrs.push_back(g.index(i, (j + 1) % g.n_phi));
      nbrs.push_back(g.index(i, (j + g.n_phi - 1) % g.n_phi));
      if (i > 0) nbrs.push_back(g.index(i - 1, j));
      if (i + 1 < g.n_theta) nbrs.push_back(g.index(i + 1, j));
      if (i == 0) nbrs.push_back(g.antipodal_lon(n));
      if (i == g.n_theta - 1) nbrs.push_back(g.antipodal_lon(n));
      for (int m : nbrs)
        if (label[m] < 0 && in_set(m)) {
          label[m] = comp;
          stack.push_back(m);
        }
    }
    rep.component_sizes.push_back(size);
    if (size == 1) rep.has_isolated_point = true;
  }
  return rep;
}

const char* to_string(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::identical: return "identical";
    case UniquenessVerdict::equal_up_to_translation: return "equal_up_to_translation";
    case UniquenessVerdict::hypothesis_violated: return "hypothesis_violated";
    case UniquenessVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

TranslationWitness translation_witness(const SupportBody& b1, const SupportBody& b2,
                                       const CurvatureFunctional& f, double tol_condition,
                                       double tol_witness) {
  ConditionReport cond = check_condition(f, b1, b2);
  if (cond.max_abs > tol_condition)
    throw std::runtime_error("hypothesis violated: curvature condition residual " +
                             std::to_string(cond.max_abs) + " exceeds " +
                             std::to_string(tol_condition));
  const Grid& g = *b1.u.grid;
  Eigen::VectorXd dc = coeffs_of(b1.u) - coeffs_of(b2.u);
  ScalarField u = make_field_from_coeffs(b1.u.grid, dc);

  TranslationWitness w;
  ScalarField rho = rho_field(u);
  w.rho_max = rho.values.maxCoeff();
  if (w.rho_max <= tol_witness * tol_witness) {
    w.verdict = UniquenessVerdict::identical;
    w.u_tilde = u;
    return w;
  }

  int p0 = 0;
  rho.values.maxCoeff(&p0);
  w.p0_node = p0;
  w.p0 = g.nodes[p0];
  GradientMapField X = gradient_map(u);
  w.E = X.points[p0].normalized();

  // Degree-1 projection recovers the translation for band-limited inputs.
  const double scale = std::sqrt(4.0 * std::numbers::pi / 3.0);
  w.translation =
      Vec3(dc[coeff_index(1, 1)], dc[coeff_index(1, -1)], dc[coeff_index(1, 0)]) / scale;
  double worst = 0.0;
  for (int n = 0; n < g.size(); ++n)
    worst = std::max(worst, std::abs(u.values[n] - w.translation.dot(g.nodes[n])));
  w.witness_residual = worst;

  // The paper's witness field and its gradient on the phi_E max set.
  Eigen::VectorXd tc = dc;
  const double amp = std::sqrt(w.rho_max) * scale;
  tc[coeff_index(1, 1)] -= amp * w.E[0];
  tc[coeff_index(1, -1)] -= amp * w.E[1];
  tc[coeff_index(1, 0)] -= amp * w.E[2];
  w.u_tilde = make_field_from_coeffs(u.grid, tc);
  w.u_tilde_max = w.u_tilde.values.cwiseAbs().maxCoeff();
  TangentField gt = covariant_gradient(w.u_tilde);
  MaxSetReport me = max_set(phi_field(u, w.E));
  for (int n : me.nodes)
    w.grad_norm_on_max_set = std::max(w.grad_norm_on_max_set, gt.at(n).norm());

  w.verdict = (w.witness_residual <= tol_witness)
                  ? UniquenessVerdict::equal_up_to_translation
                  : UniquenessVerdict::inconclusive;
  return w;
}

} // namespace ovoid
