#include "ovoid/body.hpp"

#include <doctest.h>
#include <numbers>

using namespace ovoid;

TEST_CASE("ball support function and gradient map") {
  auto g = build_grid(12);
  const Vec3 a(0.2, -0.1, 0.3);
  SupportBody b = make_ball(g, {1.5, a});
  CHECK(b.alias_error < 1e-12); // r + <a,x> is band-limited at degree 1
  for (int n = 0; n < g->size(); n += 11)
    CHECK(std::abs(b.u.values[n] - (1.5 + a.dot(g->nodes[n]))) < 1e-12);
  GradientMapField X = gradient_map(b.u);
  for (int n = 0; n < g->size(); n += 11)
    CHECK((X.points[n] - (a + 1.5 * g->nodes[n])).norm() < 1e-10);
  CHECK(check_convexity(b.u).pass);
}

TEST_CASE("ellipsoid support values match the closed form") {
  auto g = build_grid(32);
  const double A = 1.3, B = 1.0, C = 0.8;
  SupportBody b = make_ellipsoid(g, {A, B, C, Vec3::Zero()});
  double worst = 0.0;
  for (int n = 0; n < g->size(); n += 7) {
    const Vec3& x = g->nodes[n];
    const double exact = std::sqrt(A * A * x[0] * x[0] + B * B * x[1] * x[1] +
                                   C * C * x[2] * x[2]);
    worst = std::max(worst, std::abs(b.u.values[n] - exact));
  }
  CHECK(worst <= b.alias_error + 1e-13);
  CHECK(b.alias_error < 1e-6);
  CHECK(check_convexity(b.u).pass);
}

TEST_CASE("harmonic perturbed ball has the requested coefficient") {
  auto g = build_grid(10);
  SupportBody b = make_harmonic_ball(g, {1.0, 3, -2, 0.05, Vec3::Zero()});
  Eigen::VectorXd c = coeffs_of(b.u);
  CHECK(std::abs(c[coeff_index(0, 0)] - std::sqrt(4.0 * std::numbers::pi)) < 1e-12);
  CHECK(std::abs(c[coeff_index(3, -2)] - 0.05) < 1e-14);
  CHECK(check_convexity(b.u).pass);
}

TEST_CASE("non-convex perturbation is rejected") {
  auto g = build_grid(10);
  CHECK_THROWS(make_harmonic_ball(g, {1.0, 4, 0, 0.8, Vec3::Zero()}));
}

TEST_CASE("Minkowski sum, scaling and translation act on support functions") {
  auto g = build_grid(10);
  SupportBody b1 = make_ball(g, {1.0, Vec3::Zero()});
  SupportBody b2 = make_ball(g, {0.5, Vec3(0.1, 0, 0)});
  SupportBody s = minkowski_sum(b1, b2);
  CHECK((s.u.values - b1.u.values - b2.u.values).cwiseAbs().maxCoeff() < 1e-14);
  SupportBody t = scale_body(b1, 2.0);
  CHECK((t.u.values - 2.0 * b1.u.values).cwiseAbs().maxCoeff() < 1e-14);
  SupportBody tr = translate_body(b1, Vec3(0, 0.2, 0));
  for (int n = 0; n < g->size(); n += 13)
    CHECK(std::abs(tr.u.values[n] - (1.0 + 0.2 * g->nodes[n][1])) < 1e-12);
}

TEST_CASE("spherical Hessian of a ball is r times the identity") {
  auto g = build_grid(12);
  SupportBody b = make_ball(g, {2.0, Vec3(0.3, 0.1, -0.2)});
  SymMatrixField W = spherical_hessian(b.u);
  double worst = 0.0;
  for (int n = 0; n < g->size(); ++n) {
    Mat2 m = W.at(n) - 2.0 * Mat2::Identity();
    worst = std::max(worst, m.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10); // translation leaves W unchanged
}

TEST_CASE("rho and phi fields for ball plus linear term") {
  auto g = build_grid(12);
  const Vec3 a(0.2, -0.3, 0.1);
  const double r = 1.2;
  SupportBody b = make_ball(g, {r, a});
  ScalarField rho = rho_field(b.u);
  double worst = 0.0;
  for (int n = 0; n < g->size(); ++n)
    worst = std::max(worst,
                     std::abs(rho.values[n] - (a + r * g->nodes[n]).squaredNorm()));
  CHECK(worst < 1e-10);
  const double expect_max = (r + a.norm()) * (r + a.norm());
  CHECK(rho.values.maxCoeff() <= expect_max + 1e-10);

  const Vec3 E = Vec3(1, 1, 1).normalized();
  ScalarField phi = phi_field(b.u, E);
  for (int n = 0; n < g->size(); n += 17)
    CHECK(std::abs(phi.values[n] - (E.dot(a) + r * E.dot(g->nodes[n]))) < 1e-10);
  CHECK_THROWS_AS(phi_field(b.u, Vec3(1, 1, 1)), std::invalid_argument);

  // Parseval over an orthonormal triple
  ScalarField p1 = phi_field(b.u, Vec3::UnitX());
  ScalarField p2 = phi_field(b.u, Vec3::UnitY());
  ScalarField p3 = phi_field(b.u, Vec3::UnitZ());
  Eigen::VectorXd sum = p1.values.cwiseAbs2() + p2.values.cwiseAbs2() +
                        p3.values.cwiseAbs2();
  CHECK((sum - rho.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rho of a linear support function is constant") {
  auto g = build_grid(8);
  const Vec3 a(0.4, -0.2, 0.1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(g->n_coeff());
  const double s = std::sqrt(4.0 * std::numbers::pi / 3.0);
  c[coeff_index(1, 1)] = s * a[0];
  c[coeff_index(1, -1)] = s * a[1];
  c[coeff_index(1, 0)] = s * a[2];
  ScalarField u = make_field_from_coeffs(g, c);
  ScalarField rho = rho_field(u);
  CHECK((rho.values.array() - a.squaredNorm()).abs().maxCoeff() < 1e-12);
}
