#include "ovoid/functional.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ovoid {

namespace {

constexpr double kUmbilicTol = 1e-9;

void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  // Nodes on [0,1] by Newton on P_n, mapped from [-1,1].
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * t * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[k] = 0.5 * (t + 1.0);
    w[k] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

struct EigenPair {
  double l1, l2;    // l1 <= l2
  Vec2 v1, v2;      // unit eigenvectors
  bool umbilic;
};

EigenPair eigen2(const Mat2& W) {
  EigenPair e;
  const double tr = W(0, 0) + W(1, 1);
  const double d = std::hypot(W(0, 0) - W(1, 1), 2.0 * W(0, 1));
  e.l1 = 0.5 * (tr - d);
  e.l2 = 0.5 * (tr + d);
  e.umbilic = d <= kUmbilicTol * (std::abs(e.l1) + std::abs(e.l2));
  if (e.umbilic) {
    e.v1 = Vec2(1, 0);
    e.v2 = Vec2(0, 1);
    return e;
  }
  // Eigenvector for l2 from the dominant column of W - l1 I.
  Mat2 A = W - e.l1 * Mat2::Identity();
  Vec2 col = A.col(0).norm() >= A.col(1).norm() ? Vec2(A(0, 0), A(1, 0))
                                                : Vec2(A(0, 1), A(1, 1));
  e.v2 = col.normalized();
  e.v1 = Vec2(-e.v2[1], e.v2[0]);
  return e;
}

void require_symmetric(const Mat2& W, const char* who) {
  const double scale = W.cwiseAbs().maxCoeff();
  if (std::abs(W(0, 1) - W(1, 0)) > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

void require_positive_definite(const Mat2& W, const char* who) {
  auto [l1, l2] = principal_radii(W);
  if (l1 <= 0.0)
    throw std::invalid_argument(std::string(who) + ": matrix not positive definite (min eigenvalue " +
                                std::to_string(l1) + ")");
}

void check_box(const CurvatureFunctional& f, double y1, double y2) {
  if (!(y1 > f.y_min && y1 < f.y_max && y2 > f.y_min && y2 < f.y_max)) {
    std::ostringstream os;
    os << "curvature pair (" << y1 << ", " << y2 << ") outside validity box of "
       << f.name;
    throw std::domain_error(os.str());
  }
}

} // namespace

CurvatureFunctional functional_by_name(const std::string& spec) {
  CurvatureFunctional cf;
  cf.name = spec;
  if (spec == "mean") {
    cf.f = [](double a, double b) { return a + b; };
    cf.df1 = [](double, double) { return 1.0; };
    cf.df2 = [](double, double) { return 1.0; };
    cf.symmetric = true;
    return cf;
  }
  if (spec == "gauss") {
    cf.f = [](double a, double b) { return a * b; };
    cf.df1 = [](double, double b) { return b; };
    cf.df2 = [](double a, double) { return a; };
    cf.symmetric = true;
    return cf;
  }
  if (spec.rfind("weighted:", 0) == 0) {
    double a = 0, b = 0;
    char comma = 0;
    std::istringstream is(spec.substr(9));
    if (!(is >> a >> comma >> b) || comma != ',')
      throw std::invalid_argument("functional_by_name: expected weighted:a,b");
    if (a * b <= 0.0)
      throw std::invalid_argument("weighted functional violates the monotonicity hypothesis");
    cf.f = [a, b](double y1, double y2) { return a * y1 + b * y2; };
    cf.df1 = [a](double, double) { return a; };
    cf.df2 = [b](double, double) { return b; };
    cf.symmetric = (a == b);
    return cf;
  }
  if (spec.rfind("power:", 0) == 0) {
    double p = 0;
    std::istringstream is(spec.substr(6));
    if (!(is >> p) || p == 0.0)
      throw std::invalid_argument("functional_by_name: expected power:p with p != 0");
    cf.f = [p](double a, double b) { return std::pow(a, p) + std::pow(b, p); };
    cf.df1 = [p](double a, double) { return p * std::pow(a, p - 1.0); };
    cf.df2 = [p](double, double b) { return p * std::pow(b, p - 1.0); };
    cf.symmetric = true;
    return cf;
  }
  throw std::invalid_argument("functional_by_name: unknown functional '" + spec + "'");
}

bool check_monotonicity(const CurvatureFunctional& f, int samples) {
  const double lo = std::max(f.y_min, 1e-3);
  const double hi = std::min(f.y_max, 1e3);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      const double y1 = lo * std::pow(hi / lo, (i + 0.5) / samples);
      const double y2 = lo * std::pow(hi / lo, (j + 0.5) / samples);
      if (f.df1(y1, y2) * f.df2(y1, y2) <= 0.0) return false;
    }
  }
  return true;
}

std::pair<double, double> principal_radii(const Mat2& W) {
  require_symmetric(W, "principal_radii");
  if (!W.allFinite()) throw std::invalid_argument("principal_radii: non-finite input");
  const double s1 = W(0, 0) + W(1, 1);
  // (w11 - w22)^2 + 4 w12^2 == sigma1^2 - 4 sigma2, but immune to cancellation.
  const double d = std::hypot(W(0, 0) - W(1, 1), 2.0 * W(0, 1));
  return {0.5 * (s1 - d), 0.5 * (s1 + d)};
}

std::pair<double, double> principal_curvatures(const Mat2& W) {
  auto [l1, l2] = principal_radii(W);
  if (l1 <= 0.0)
    throw std::invalid_argument("principal_curvatures: W not positive definite");
  return {1.0 / l1, 1.0 / l2};
}

double evaluate_functional(const CurvatureFunctional& f, const Mat2& W) {
  auto [k1, k2] = principal_curvatures(W);
  check_box(f, k1, k2);
  return f.f(k1, k2);
}

Mat2 functional_derivative(const CurvatureFunctional& f, const Mat2& W) {
  require_positive_definite(W, "functional_derivative");
  EigenPair e = eigen2(W);
  const double k1 = 1.0 / e.l1, k2 = 1.0 / e.l2; // k1 >= k2
  check_box(f, k1, k2);
  if (e.umbilic) {
    // Deterministic measurable selection at coalescing radii.
    const double fsym = 0.5 * (f.df1(k1, k2) + f.df2(k1, k2));
    return -fsym / (e.l1 * e.l1) * Mat2::Identity();
  }
  const Mat2 P1 = e.v1 * e.v1.transpose();
  const Mat2 P2 = e.v2 * e.v2.transpose();
  // d(1/lambda_a)/dW = -lambda_a^{-2} P_a; slot 1 of f sees kappa1 = 1/lambda1.
  return -f.df1(k1, k2) / (e.l1 * e.l1) * P1 - f.df2(k1, k2) / (e.l2 * e.l2) * P2;
}

namespace {

CoefficientField finalize_coefficients(GridPtr grid, Eigen::VectorXd f11,
                                       Eigen::VectorXd f12, Eigen::VectorXd f22,
                                       std::string provenance) {
  CoefficientField F;
  F.grid = std::move(grid);
  F.f11 = std::move(f11);
  F.f12 = std::move(f12);
  F.f22 = std::move(f22);
  F.provenance = std::move(provenance);
  // Sign normalization: if the field is negative definite everywhere, store -F.
  double max_eig = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < F.grid->size(); ++n) {
    auto [l1, l2] = principal_radii(F.at(n));
    max_eig = std::max(max_eig, l2);
  }
  if (max_eig < 0.0) {
    F.f11 = -F.f11;
    F.f12 = -F.f12;
    F.f22 = -F.f22;
    F.negated = true;
    F.provenance += " [negated]";
  }
  auto [lam, Lam] = ellipticity_constants(F);
  F.lambda = lam;
  F.Lambda = Lam;
  F.uniformly_elliptic = lam > 0.0;
  return F;
}

} // namespace

CoefficientField coefficient_field_secant(const CurvatureFunctional& f,
                                          const SymMatrixField& W1,
                                          const SymMatrixField& W2,
                                          int quadrature_nodes) {
  require_same_grid(W1.grid, W2.grid, "coefficient_field_secant");
  if (quadrature_nodes < 1)
    throw std::invalid_argument("coefficient_field_secant: quadrature nodes");
  std::vector<double> t, w;
  gauss_legendre01(quadrature_nodes, t, w);
  const Grid& g = *W1.grid;
  Eigen::VectorXd f11(g.size()), f12(g.size()), f22(g.size());
  std::string error; // first failure, rethrown outside the parallel region
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int n = 0; n < g.size(); ++n) {
    const Mat2 A = W1.at(n);
    const Mat2 B = W2.at(n);
    Mat2 acc = Mat2::Zero();
    for (int q = 0; q < quadrature_nodes; ++q) {
      const Mat2 Wt = t[q] * A + (1.0 - t[q]) * B;
      try {
        acc += w[q] * functional_derivative(f, Wt);
      } catch (const std::exception& ex) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (error.empty())
          error = "coefficient_field_secant: segment leaves validity box at node " +
                  std::to_string(n) + ", t=" + std::to_string(t[q]) + ": " + ex.what();
        break;
      }
    }
    f11[n] = acc(0, 0);
    f12[n] = acc(0, 1);
    f22[n] = acc(1, 1);
  }
  if (!error.empty()) throw std::domain_error(error);
  std::ostringstream os;
  os << "secant(" << f.name << ", nq=" << quadrature_nodes << ")";
  return finalize_coefficients(W1.grid, std::move(f11), std::move(f12), std::move(f22),
                               os.str());
}

std::pair<double, double> ellipticity_constants(const CoefficientField& F) {
  double lam = std::numeric_limits<double>::infinity();
  double Lam = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < F.grid->size(); ++n) {
    auto [l1, l2] = principal_radii(F.at(n));
    lam = std::min(lam, l1);
    Lam = std::max(Lam, l2);
  }
  return {lam, Lam};
}

CoefficientField identity_coefficients(GridPtr grid, double c) {
  const int N = grid->size();
  CoefficientField F;
  F.grid = std::move(grid);
  F.f11 = Eigen::VectorXd::Constant(N, c);
  F.f12 = Eigen::VectorXd::Zero(N);
  F.f22 = Eigen::VectorXd::Constant(N, c);
  F.lambda = c;
  F.Lambda = c;
  F.uniformly_elliptic = c > 0.0;
  F.provenance = "identity*" + std::to_string(c);
  F.derivative = [](int, Mat2 dF[2]) {
    dF[0].setZero();
    dF[1].setZero();
  };
  return F;
}

CoefficientField coefficient_field_by_name(GridPtr grid, const std::string& spec) {
  if (spec.rfind("const:", 0) == 0) return identity_coefficients(grid, std::stod(spec.substr(6)));
  if (spec == "const") return identity_coefficients(grid, 1.0);
  if (spec.rfind("scalar:", 0) == 0) {
    const double p = std::stod(spec.substr(7));
    if (std::abs(p) >= 1.0)
      throw std::invalid_argument("scalar coefficient field needs |p| < 1 for ellipticity");
    const int N = grid->size();
    CoefficientField F;
    F.grid = grid;
    F.f11.resize(N);
    F.f12 = Eigen::VectorXd::Zero(N);
    F.f22.resize(N);
    for (int n = 0; n < N; ++n) {
      const double a = 1.0 + p * grid->nodes[n][2];
      F.f11[n] = a;
      F.f22[n] = a;
    }
    GridPtr gp = grid;
    F.derivative = [gp, p](int node, Mat2 dF[2]) {
      // alpha = 1 + p x3; alpha_;k = p (x3)_;k.
      const Vec3 e1 = gp->e1(node), e2 = gp->e2(node);
      dF[0] = p * e1[2] * Mat2::Identity();
      dF[1] = p * e2[2] * Mat2::Identity();
    };
    auto [lam, Lam] = ellipticity_constants(F);
    F.lambda = lam;
    F.Lambda = Lam;
    F.uniformly_elliptic = lam > 0.0;
    F.provenance = spec;
    return F;
  }
  if (spec.rfind("tangent:", 0) == 0) {
    const double gamma = std::stod(spec.substr(8));
    if (gamma <= -1.0)
      throw std::invalid_argument("tangent coefficient field needs gamma > -1");
    const Vec3 A(1.0, 0.0, 0.0);
    const int N = grid->size();
    CoefficientField F;
    F.grid = grid;
    F.f11.resize(N);
    F.f12.resize(N);
    F.f22.resize(N);
    for (int n = 0; n < N; ++n) {
      const double a1 = A.dot(grid->e1(n)), a2 = A.dot(grid->e2(n));
      F.f11[n] = 1.0 + gamma * a1 * a1;
      F.f12[n] = gamma * a1 * a2;
      F.f22[n] = 1.0 + gamma * a2 * a2;
    }
    GridPtr gp = grid;
    F.derivative = [gp, gamma, A](int node, Mat2 dF[2]) {
      // a_i = <A, e_i> is the gradient of <A, x>: a_{i;k} = -<A, x> delta_ik.
      const double a1 = A.dot(gp->e1(node)), a2 = A.dot(gp->e2(node));
      const double ax = A.dot(gp->nodes[node]);
      const Vec2 a(a1, a2);
      for (int k = 0; k < 2; ++k) {
        Vec2 da = Vec2::Zero();
        da[k] = -ax;
        dF[k] = gamma * (da * a.transpose() + a * da.transpose());
      }
    };
    auto [lam, Lam] = ellipticity_constants(F);
    F.lambda = lam;
    F.Lambda = Lam;
    F.uniformly_elliptic = lam > 0.0;
    F.provenance = spec;
    return F;
  }
  throw std::invalid_argument("coefficient_field_by_name: unknown field '" + spec + "'");
}

Mat2 null_solution_from(const Mat2& F, double w11, double w12) {
  require_positive_definite(F, "null_solution_sample");
  const double w22 = -(F(0, 0) * w11 + 2.0 * F(0, 1) * w12) / F(1, 1);
  Mat2 W;
  W << w11, w12, w12, w22;
  return W;
}

Mat2 null_solution_sample(const Mat2& F, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double w11 = uni(rng);
  const double w12 = uni(rng);
  return null_solution_from(F, w11, w12);
}

LemmaDetReport lemma_det_check(const Mat2& F, const Mat2& W, double lambda,
                               double Lambda) {
  const double residual = (F.array() * W.array()).sum();
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff() * W.cwiseAbs().maxCoeff());
  if (std::abs(residual) > 1e-10 * scale)
    throw std::invalid_argument("lemma_det_check: constraint residual too large: " +
                                std::to_string(residual));
  if (!(lambda > 0.0) || Lambda < lambda)
    throw std::invalid_argument("lemma_det_check: invalid ellipticity pair");
  LemmaDetReport rep;
  rep.lhs = W(0, 0) * W(0, 0) + 2.0 * W(0, 1) * W(0, 1) + W(1, 1) * W(1, 1);
  rep.rhs = -(2.0 * Lambda / lambda) * W.determinant();
  rep.pass = rep.lhs <= rep.rhs + 1e-12 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

ConditionReport check_condition(const CurvatureFunctional& f, const SupportBody& b1,
                                const SupportBody& b2) {
  require_same_grid(b1.u.grid, b2.u.grid, "check_condition");
  for (const SupportBody* b : {&b1, &b2}) {
    ConvexityReport rep = check_convexity(b->u);
    if (!rep.pass)
      throw std::invalid_argument("check_condition: body not strictly convex (" +
                                  b->provenance + ")");
  }
  SymMatrixField W1 = spherical_hessian(b1.u);
  SymMatrixField W2 = spherical_hessian(b2.u);
  const Grid& g = *b1.u.grid;
  Eigen::VectorXd r(g.size());
  for (int n = 0; n < g.size(); ++n)
    r[n] = evaluate_functional(f, W1.at(n)) - evaluate_functional(f, W2.at(n));
  ConditionReport rep{make_field(b1.u.grid, std::move(r)), 0.0};
  rep.max_abs = rep.residual.values.cwiseAbs().maxCoeff();
  return rep;
}

} // namespace ovoid
