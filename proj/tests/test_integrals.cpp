#include "ovoid/integrals.hpp"

#include <doctest.h>
#include <numbers>
#include <random>

using namespace ovoid;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("area and volume of balls, with translation invariance") {
  auto g = build_grid(16);
  SupportBody b = make_ball(g, {1.0, Vec3::Zero()});
  CHECK(area_integral(b) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(volume(b) == doctest::Approx(4.0 / 3.0 * kPi).epsilon(1e-12));

  SupportBody bt = make_ball(g, {1.5, Vec3(0.2, -0.1, 0.05)});
  CHECK(area_integral(bt) == doctest::Approx(4.0 * kPi * 2.25).epsilon(1e-12));
  CHECK(volume(bt) == doctest::Approx(4.0 / 3.0 * kPi * 3.375).epsilon(1e-8));
}

TEST_CASE("ball equals the degenerate ellipsoid") {
  auto g = build_grid(16);
  SupportBody b = make_ball(g, {1.0, Vec3::Zero()});
  SupportBody e = make_ellipsoid(g, {1.0, 1.0, 1.0, Vec3::Zero()});
  CHECK(std::abs(volume(b) - volume(e)) < 1e-10);
}

TEST_CASE("mixed discriminant integral of two balls") {
  auto g = build_grid(12);
  SupportBody b1 = make_ball(g, {1.0, Vec3::Zero()});
  SupportBody b2 = make_ball(g, {1.5, Vec3(0.1, 0, 0)});
  CHECK(mixed_discriminant_integral(b1, b2) ==
        doctest::Approx(4.0 * kPi * 1.5).epsilon(1e-12));
  CHECK(mixed_discriminant_integral(b1, b1) ==
        doctest::Approx(area_integral(b1)).epsilon(1e-13));
  // symmetry
  CHECK(mixed_discriminant_integral(b1, b2) ==
        doctest::Approx(mixed_discriminant_integral(b2, b1)).epsilon(1e-14));
}

TEST_CASE("polarization identity is exact and Minkowski addition is monotone") {
  auto g = build_grid(16);
  SupportBody b1 = make_ellipsoid(g, {1.2, 1.0, 0.9, Vec3::Zero()});
  SupportBody b2 = make_ball(g, {0.7, Vec3(0.1, -0.2, 0)});
  SupportBody s = minkowski_sum(b1, b2);
  const double pol = area_integral(s) - area_integral(b1) - area_integral(b2) -
                     2.0 * mixed_discriminant_integral(b1, b2);
  CHECK(std::abs(pol) < 1e-10);
  CHECK(area_integral(s) >= area_integral(b1) + area_integral(b2));
}

TEST_CASE("scaling laws") {
  auto g = build_grid(12);
  SupportBody b = make_ellipsoid(g, {1.1, 1.0, 0.95, Vec3::Zero()});
  const double a0 = area_integral(b), v0 = volume(b);
  for (double t : {0.5, 2.0, 3.0}) {
    SupportBody bt = scale_body(b, t);
    CHECK(std::abs(area_integral(bt) - t * t * a0) < 1e-10 * t * t * a0 + 1e-10);
    CHECK(std::abs(volume(bt) - t * t * t * v0) < 1e-10 * t * t * t * v0 + 1e-10);
  }
}

TEST_CASE("pointwise determinant comparison for psd pairs") {
  // det(W1 - W2) + det(W1 + W2) = 2 det W1 + 2 det W2 >= 0 for psd inputs
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100000; ++t) {
    Eigen::Matrix2d A, B;
    A << nd(rng), nd(rng), nd(rng), nd(rng);
    B << nd(rng), nd(rng), nd(rng), nd(rng);
    Mat2 W1 = A * A.transpose();
    Mat2 W2 = B * B.transpose();
    const double lhs = -(W1 - W2).determinant();
    const double rhs = (W1 + W2).determinant();
    REQUIRE(lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("certificate chain for a translated pair and a perturbed pair") {
  auto g = build_grid(16);
  CurvatureFunctional f = functional_by_name("mean");

  SUBCASE("translated duplicate: left side collapses to zero") {
    SupportBody b1 = make_ellipsoid(g, {1.1, 1.0, 0.95, Vec3::Zero()});
    SupportBody b2 = translate_body(b1, Vec3(0.2, -0.1, 0.05));
    W22Certificate cert = w22_certificate(b1, b2, f);
    CHECK(cert.pass_pointwise);
    CHECK(cert.pass_integral);
    CHECK(cert.integral_w2 < 1e-18);
    CHECK(cert.margin1 > -1e-10);
    CHECK(cert.integral_margin > 0.0);
  }

  SUBCASE("precondition failure") {
    SupportBody b1 = make_ball(g, {1.0, Vec3::Zero()});
    SupportBody b2 = make_ball(g, {2.0, Vec3::Zero()});
    CHECK_THROWS_AS(w22_certificate(b1, b2, f), std::runtime_error);
  }
}
