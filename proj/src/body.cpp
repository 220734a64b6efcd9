#include "ovoid/body.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ovoid {

namespace {

SupportBody finish_preset(GridPtr grid, const Eigen::VectorXd& exact_values,
                          std::string provenance, bool require_convex) {
  Eigen::VectorXd coeffs = analyze(*grid, exact_values);
  ScalarField u = make_field_from_coeffs(grid, std::move(coeffs));
  double alias = (u.values - exact_values).cwiseAbs().maxCoeff();
  SupportBody body{std::move(u), std::move(provenance), alias};
  if (require_convex) {
    ConvexityReport rep = check_convexity(body.u);
    if (!rep.pass) {
      std::ostringstream os;
      os << "preset not strictly convex on the grid: min eigenvalue " << rep.min_eig
         << " at node " << rep.argmin_node << " (" << body.provenance << ")";
      throw std::invalid_argument(os.str());
    }
  }
  return body;
}

} // namespace

SupportBody make_ball(GridPtr grid, const BallParams& p) {
  if (p.radius <= 0.0) throw std::invalid_argument("make_ball: radius must be positive");
  Eigen::VectorXd v(grid->size());
  for (int n = 0; n < grid->size(); ++n) v[n] = p.radius + p.center.dot(grid->nodes[n]);
  std::ostringstream os;
  os << "ball(r=" << p.radius << ",center=[" << p.center.transpose() << "])";
  return finish_preset(std::move(grid), v, os.str(), true);
}

SupportBody make_ellipsoid(GridPtr grid, const EllipsoidParams& p) {
  if (p.a <= 0.0 || p.b <= 0.0 || p.c <= 0.0)
    throw std::invalid_argument("make_ellipsoid: semi-axes must be positive");
  Eigen::VectorXd v(grid->size());
  for (int n = 0; n < grid->size(); ++n) {
    const Vec3& x = grid->nodes[n];
    v[n] = std::sqrt(p.a * p.a * x[0] * x[0] + p.b * p.b * x[1] * x[1] +
                     p.c * p.c * x[2] * x[2]) +
           p.center.dot(x);
  }
  std::ostringstream os;
  os << "ellipsoid(" << p.a << "," << p.b << "," << p.c << ",center=["
     << p.center.transpose() << "])";
  return finish_preset(std::move(grid), v, os.str(), true);
}

SupportBody make_harmonic_ball(GridPtr grid, const HarmonicBallParams& p) {
  if (p.radius <= 0.0)
    throw std::invalid_argument("make_harmonic_ball: radius must be positive");
  if (p.degree < 2 || p.degree > grid->L || std::abs(p.order) > p.degree)
    throw std::invalid_argument("make_harmonic_ball: invalid degree/order");
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(grid->n_coeff());
  coeffs[coeff_index(0, 0)] = p.radius * std::sqrt(4.0 * M_PI);
  coeffs[coeff_index(p.degree, p.order)] = p.amplitude;
  coeffs[coeff_index(1, -1)] += std::sqrt(4.0 * M_PI / 3.0) * p.center[1];
  coeffs[coeff_index(1, 0)] += std::sqrt(4.0 * M_PI / 3.0) * p.center[2];
  coeffs[coeff_index(1, 1)] += std::sqrt(4.0 * M_PI / 3.0) * p.center[0];
  ScalarField u = make_field_from_coeffs(grid, std::move(coeffs));
  std::ostringstream os;
  os << "harmonic_perturbed_ball(r=" << p.radius << ",l=" << p.degree << ",m=" << p.order
     << ",eps=" << p.amplitude << ")";
  SupportBody body{std::move(u), os.str(), 0.0};
  ConvexityReport rep = check_convexity(body.u);
  if (!rep.pass) {
    std::ostringstream err;
    err << "make_harmonic_ball: amplitude " << p.amplitude
        << " breaks strict convexity (min eigenvalue " << rep.min_eig << " at node "
        << rep.argmin_node << ")";
    throw std::invalid_argument(err.str());
  }
  return body;
}

SupportBody minkowski_sum(const SupportBody& b1, const SupportBody& b2) {
  require_same_grid(b1.u.grid, b2.u.grid, "minkowski_sum");
  ScalarField u{b1.u.grid, b1.u.values + b2.u.values, std::nullopt};
  if (b1.u.has_coeffs() && b2.u.has_coeffs()) u.coeffs = *b1.u.coeffs + *b2.u.coeffs;
  return SupportBody{std::move(u), b1.provenance + " + " + b2.provenance,
                     b1.alias_error + b2.alias_error};
}

SupportBody scale_body(const SupportBody& b, double t) {
  if (t <= 0.0) throw std::invalid_argument("scale_body: factor must be positive");
  ScalarField u{b.u.grid, t * b.u.values, std::nullopt};
  if (b.u.has_coeffs()) u.coeffs = t * *b.u.coeffs;
  std::ostringstream os;
  os << t << " * (" << b.provenance << ")";
  return SupportBody{std::move(u), os.str(), t * b.alias_error};
}

SupportBody translate_body(const SupportBody& b, const Vec3& a) {
  const Grid& g = *b.u.grid;
  ScalarField u = b.u;
  for (int n = 0; n < g.size(); ++n) u.values[n] += a.dot(g.nodes[n]);
  if (u.has_coeffs()) {
    const double s = std::sqrt(4.0 * M_PI / 3.0);
    (*u.coeffs)[coeff_index(1, -1)] += s * a[1];
    (*u.coeffs)[coeff_index(1, 0)] += s * a[2];
    (*u.coeffs)[coeff_index(1, 1)] += s * a[0];
  }
  std::ostringstream os;
  os << "(" << b.provenance << ") translated by [" << a.transpose() << "]";
  return SupportBody{std::move(u), os.str(), b.alias_error};
}

SymMatrixField spherical_hessian(const ScalarField& u) {
  SymMatrixField w = covariant_hessian(u);
  // synthesized values of u, so W is consistent with the coefficients
  Eigen::VectorXd uv = u.has_coeffs() ? synthesize(*u.grid, *u.coeffs) : u.values;
  w.m11 += uv;
  w.m22 += uv;
  return w;
}

ConvexityReport check_convexity(const ScalarField& u) {
  SymMatrixField w = spherical_hessian(u);
  ConvexityReport rep;
  rep.grid_L = u.grid->L;
  rep.min_eig = std::numeric_limits<double>::infinity();
  for (int n = 0; n < u.grid->size(); ++n) {
    const double tr = w.m11[n] + w.m22[n];
    const double disc = std::hypot(w.m11[n] - w.m22[n], 2.0 * w.m12[n]);
    const double eig = 0.5 * (tr - disc);
    if (eig < rep.min_eig) {
      rep.min_eig = eig;
      rep.argmin_node = n;
    }
  }
  rep.pass = rep.min_eig > 0.0;
  return rep;
}

GradientMapField gradient_map(const ScalarField& u) {
  const Grid& g = *u.grid;
  TangentField grad = covariant_gradient(u);
  Eigen::VectorXd uv = u.has_coeffs() ? synthesize(g, *u.coeffs) : u.values;
  GradientMapField out{u.grid, std::vector<Vec3>(g.size())};
  for (int n = 0; n < g.size(); ++n)
    out.points[n] = grad.c1[n] * g.e1(n) + grad.c2[n] * g.e2(n) + uv[n] * g.nodes[n];
  return out;
}

ScalarField rho_field(const ScalarField& u) {
  GradientMapField X = gradient_map(u);
  Eigen::VectorXd v(u.grid->size());
  for (int n = 0; n < u.grid->size(); ++n) v[n] = X.points[n].squaredNorm();
  return make_field(u.grid, std::move(v));
}

ScalarField phi_field(const ScalarField& u, const Vec3& E) {
  if (std::abs(E.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("phi_field: direction must be a unit vector");
  GradientMapField X = gradient_map(u);
  Eigen::VectorXd v(u.grid->size());
  for (int n = 0; n < u.grid->size(); ++n) v[n] = E.dot(X.points[n]);
  return make_field(u.grid, std::move(v));
}

} // namespace ovoid
