#include "hilbert/hilbert.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hilbert;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

Vec unit_circle(double angle) { return oracle::v2(std::cos(angle), std::sin(angle)); }

StraightTriangle affine_triangle(const Vec& a, const Vec& b, const Vec& c) {
  return {ProjPoint(oracle::homog(a)), ProjPoint(oracle::homog(b)), ProjPoint(oracle::homog(c))};
}

// Ideal triangle in the hyperboloid model: each side point's distance to the other two
// full geodesics is asinh|<X, n>| with n the unit spacelike normal.
double ideal_triangle_thinness_oracle(const std::array<Vec, 3>& u, int samples) {
  const Mat J = oracle::lorentz(2);
  auto normal = [&](const Vec& a, const Vec& b) {
    const Eigen::Vector3d A = oracle::homog(a), B = oracle::homog(b);
    const Vec n = J * Vec(A.cross(B));
    return Vec(n / std::sqrt(n.dot(J * n)));
  };
  double delta = 0.0;
  for (int side = 0; side < 3; ++side) {
    const Vec& p = u[side];
    const Vec& q = u[(side + 1) % 3];
    const Vec n1 = normal(q, u[(side + 2) % 3]), n2 = normal(u[(side + 2) % 3], p);
    for (int i = 1; i < samples; ++i) {
      const double s = static_cast<double>(i) / samples;
      const Vec x = (1 - s) * p + s * q;
      const Vec X = oracle::homog(x) / std::sqrt(1 - x.squaredNorm());
      const double d = std::min(std::asinh(std::abs(X.dot(J * n1))), std::asinh(std::abs(X.dot(J * n2))));
      delta = std::max(delta, 2.0 * d);
    }
  }
  return delta;
}

std::array<Vec, 3> cube_roots() {
  return {unit_circle(0), unit_circle(2 * std::numbers::pi / 3), unit_circle(4 * std::numbers::pi / 3)};
}

}  // namespace

TEST(Thinness, NearIdealTriangleInTheKleinDisc) {
  const ConvexBody k = make_example("klein_ball(2)");
  const auto u = cube_roots();
  const double inset = 1.0 - 1e-6;
  const ThinnessResult r = triangle_thinness(k, affine_triangle(inset * u[0], inset * u[1], inset * u[2]));
  const double oracle_delta = ideal_triangle_thinness_oracle(u, 20000);
  EXPECT_NEAR(oracle_delta, 2.0 * std::log(1.0 + std::sqrt(2.0)), 1e-6);
  EXPECT_NEAR(r.delta, oracle_delta, 5e-2);
  EXPECT_FALSE(r.nudged);
}

TEST(Thinness, BoundaryVerticesAreNudged) {
  const ConvexBody k = make_example("klein_ball(2)");
  const auto u = cube_roots();
  const ThinnessResult r = triangle_thinness(k, affine_triangle(u[0], u[1], u[2]));
  EXPECT_TRUE(r.nudged);
  EXPECT_NEAR(r.delta, 2.0 * std::log(1.0 + std::sqrt(2.0)), 5e-2);
}

TEST(Thinness, TinyTriangleIsBoundedByItsDiameter) {
  const ConvexBody k = make_example("klein_ball(2)");
  const StraightTriangle T = affine_triangle(oracle::v2(0.1, 0.1), oracle::v2(0.1003, 0.1), oracle::v2(0.1, 0.1003));
  const double diam = std::max({hilbert_distance(k, T.a, T.b), hilbert_distance(k, T.b, T.c), hilbert_distance(k, T.a, T.c)});
  ASSERT_LE(diam, 1e-3);
  EXPECT_LE(triangle_thinness(k, T).delta, diam);
  EXPECT_LE(incenter(k, T, 50).inradius, diam);
}

TEST(Thinness, HexSimplexCornersMakeFatTriangles) {
  const ConvexBody h = make_example("hex_simplex");
  double last = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double a = 1 - 2 * eps;
    const StraightTriangle T{ProjPoint(oracle::v3(a, eps, eps)), ProjPoint(oracle::v3(eps, a, eps)),
                             ProjPoint(oracle::v3(eps, eps, a))};
    const double d = triangle_thinness(h, T, ThinnessOptions{80}).delta;
    EXPECT_GT(d, last);
    last = d;
  }
  EXPECT_GT(last, 5.0);
}

TEST(Thinness, RefinementDoesNotLoseMuch) {
  const ConvexBody k = make_example("klein_ball(2)");
  const StraightTriangle T = affine_triangle(oracle::v2(0.9, 0), oracle::v2(-0.3, 0.8), oracle::v2(-0.5, -0.7));
  const double d50 = triangle_thinness(k, T, ThinnessOptions{50}).delta;
  const double d100 = triangle_thinness(k, T, ThinnessOptions{100}).delta;
  EXPECT_GE(d100, d50 - 1e-3);
}

TEST(Thinness, ProjectiveInvariance) {
  const ConvexBody k = make_example("klein_ball(2)");
  const StraightTriangle T = affine_triangle(oracle::v2(0.9, 0), oracle::v2(-0.3, 0.8), oracle::v2(-0.5, -0.7));
  const ProjMap A(oracle::boost(2, 0.7));
  const StraightTriangle AT{A.apply(T.a), A.apply(T.b), A.apply(T.c)};
  EXPECT_NEAR(triangle_thinness(k, T, ThinnessOptions{100}).delta, triangle_thinness(k, AT, ThinnessOptions{100}).delta,
              2e-3);

  const ConvexBody h = make_example("hex_simplex");
  const StraightTriangle S{ProjPoint(oracle::v3(0.6, 0.3, 0.1)), ProjPoint(oracle::v3(0.1, 0.8, 0.1)),
                           ProjPoint(oracle::v3(0.2, 0.2, 0.6))};
  const ProjMap D(Mat(oracle::v3(3, 0.5, 1).asDiagonal()));
  const StraightTriangle DS{D.apply(S.a), D.apply(S.b), D.apply(S.c)};
  EXPECT_NEAR(triangle_thinness(h, S, ThinnessOptions{100}).delta, triangle_thinness(h, DS, ThinnessOptions{100}).delta,
              2e-3);
}

TEST(Thinness, DegenerateTriangle) {
  const ConvexBody k = make_example("klein_ball(2)");
  const StraightTriangle T = affine_triangle(oracle::v2(0, 0), oracle::v2(0.2, 0.1), oracle::v2(0.4, 0.2));
  EXPECT_EQ(code_of([&] { triangle_thinness(k, T); }), ErrorCode::DegenerateTriangle);
  EXPECT_EQ(code_of([&] { incenter(k, T); }), ErrorCode::DegenerateTriangle);
  EXPECT_EQ(code_of([&] { pet_check(k, T); }), ErrorCode::DegenerateTriangle);
}

TEST(Incenter, SymmetricTriangleCentresAtTheBarycentre) {
  const ConvexBody k = make_example("klein_ball(2)");
  const auto u = cube_roots();
  const Incenter c = incenter(k, affine_triangle(0.95 * u[0], 0.95 * u[1], 0.95 * u[2]), 200, 4);
  EXPECT_LT(ProjPoint(c.point).affine().norm(), 1e-3);
  EXPECT_GT(c.inradius, 0.0);
}

TEST(Incenter, InradiusIsAtLeastHalfTheFatness) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(11);
  for (int i = 0; i < 20; ++i) {
    const StraightTriangle T{ProjPoint(oracle::homog(oracle::random_ball_point(2, g, 0.95))),
                             ProjPoint(oracle::homog(oracle::random_ball_point(2, g, 0.95))),
                             ProjPoint(oracle::homog(oracle::random_ball_point(2, g, 0.95)))};
    double delta = 0.0, r = 0.0;
    try {
      delta = triangle_thinness(k, T, ThinnessOptions{40}).delta;
      r = incenter(k, T, 60, static_cast<std::uint64_t>(i), ThinnessOptions{40}).inradius;
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::DegenerateTriangle) << e.what();
      continue;
    }
    EXPECT_GE(r, delta / 2.0 - 1e-3) << "triangle " << i;
  }
}

TEST(Pet, SimplexFacesAndStrictlyConvexBall) {
  const ConvexBody s2 = make_example("simplex", {{"n", 2}});
  EXPECT_TRUE(pet_check(s2, {ProjPoint(Vec::Unit(3, 0)), ProjPoint(Vec::Unit(3, 1)), ProjPoint(Vec::Unit(3, 2))}));

  const ConvexBody s3 = make_example("simplex", {{"n", 3}});
  // every edge lies in a coordinate face, the open triangle meets the open orthant
  EXPECT_TRUE(pet_check(s3, {ProjPoint(Vec::Unit(4, 0)), ProjPoint(Vec::Unit(4, 1)), ProjPoint(Vec(Vec::Unit(4, 2) + Vec::Unit(4, 3)))}));
  EXPECT_FALSE(pet_check(s3, {ProjPoint(Vec::Unit(4, 0)), ProjPoint(Vec::Unit(4, 1)), ProjPoint(Vec::Unit(4, 2))}));

  const ConvexBody k = make_example("klein_ball(2)");
  const auto u = cube_roots();
  EXPECT_FALSE(pet_check(k, affine_triangle(u[0], u[1], u[2])));
}

TEST(Pet, NudgedPetCopiesGrowFat) {
  const ConvexBody s2 = make_example("simplex", {{"n", 2}});
  const StraightTriangle T{ProjPoint(Vec::Unit(3, 0)), ProjPoint(Vec::Unit(3, 1)), ProjPoint(Vec::Unit(3, 2))};
  double last = 0.0;
  for (double nudge : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double d = triangle_thinness(s2, T, ThinnessOptions{60, nudge}).delta;
    EXPECT_GT(d, last + 1.0) << nudge;
    last = d;
  }
}

TEST(FatSearch, HexSimplexHasAFatTriangleTheDiscDoesNot) {
  const ConvexBody h = make_example("hex_simplex");
  const FatSearchResult r = fat_triangle_search(h, 3.0);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GE(triangle_thinness(h, r.witness->triangle).delta, 3.0);

  const ConvexBody k = make_example("klein_ball(2)");
  const FatSearchResult none = fat_triangle_search(k, 3.0, 120);
  EXPECT_FALSE(none.witness.has_value());
  EXPECT_LE(none.best_delta, 2.0 * std::log(1.0 + std::sqrt(2.0)) + 5e-2);
  EXPECT_GT(none.best_delta, 1.0);
}

TEST(FatSearch, Sl5OrbitHullHasFlatBoundary) {
  const ConvexBody s = make_example("sl5_orbit_hull", {{"count", 40}});
  const FatSearchResult r = fat_triangle_search(s, 3.0, 200, 2);
  ASSERT_TRUE(r.witness.has_value()) << "best " << r.best_delta;
  EXPECT_GE(r.witness->delta, 3.0);
}
