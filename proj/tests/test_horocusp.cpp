#include "hilbert/hilbert.hpp"
#include "property_suites.hpp"
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

// paraboloid(2) in homogeneous [x0 : u : w]; p = [1 : 0 : 0], H = w, r = [0 : 0 : 1]
const ConvexBody& parab() {
  static const ConvexBody b = make_example("paraboloid(2)");
  return b;
}

const ParabolicChart& parab_chart() {
  static const ParabolicChart c = make_chart(parab(), ProjPoint(Vec::Unit(3, 0)));
  return c;
}

Mat translation(double u) { return translation_group_element(Vec::Constant(1, u)).matrix(); }

Mat dilation(double lambda) { return Mat(oracle::v3(lambda, 1.0, 1.0 / lambda).asDiagonal()); }

// Stabilizer element T_u D_lambda and its tau = lambda^2.
struct Stab {
  Mat B;
  double tau;
};

Stab random_stabilizer(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double lambda = std::exp(u(g) / 2.0);
  return {translation(u(g)) * dilation(lambda), lambda * lambda};
}

ProjPoint paraboloid_point(double x0, double u) { return ProjPoint(oracle::v3(x0, u, 1.0)); }

bool same_projective(const Mat& A, const Mat& B, double tol) {
  const Mat a = A / A.norm(), b = B / B.norm();
  return std::min((a - b).norm(), (a + b).norm()) <= tol;
}

}  // namespace

TEST(Chart, ParaboloidGraphIsHalfSquare) {
  const auto& c = parab_chart();
  EXPECT_NEAR(c.H.dot(c.R), 1.0, 1e-14);
  EXPECT_NEAR(c.nu.dot(c.P), 1.0, 1e-14);
  for (double u = -3.0; u <= 3.0; u += 0.25) {
    const auto f = boundary_graph(c, Vec::Constant(1, u));
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(*f, 0.5 * u * u, 1e-9 * std::max(1.0, u * u));
  }
}

TEST(Chart, KleinGraphPointsAreOnTheCircle) {
  const ConvexBody k = make_example("klein_ball(2)");
  const ParabolicChart c =
      make_chart(k, ProjPoint::from_affine(oracle::v2(0, 1)), Vec(oracle::v3(0, -1, 1)), ProjPoint::from_affine(oracle::v2(0, -1)));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(-5, 5);
    const auto f = boundary_graph(c, Vec::Constant(1, u));
    ASSERT_TRUE(f.has_value());
    const Vec X = chart_lift(c, oracle::v2(u, *f));
    EXPECT_NEAR(ProjPoint(X).affine().norm(), 1.0, 1e-9);
    // the chart coordinates invert the lift
    EXPECT_LT((chart_coordinates(c, X) - oracle::v2(u, *f)).norm(), 1e-8 * std::max(1.0, std::abs(*f)));
  }
}

TEST(Chart, ErrorsOnBadData) {
  const ConvexBody k = make_example("klein_ball(2)");
  EXPECT_EQ(code_of([&] { make_chart(k, ProjPoint::from_affine(oracle::v2(0, 0.5))); }), ErrorCode::NotBoundary);
  EXPECT_EQ(code_of([&] { make_chart(k, ProjPoint::from_affine(oracle::v2(0, 1)), Vec(oracle::v3(1, 0, -1))); }),
            ErrorCode::NotSupporting);
  const ConvexBody sq = make_example("square");
  EXPECT_EQ(code_of([&] {
              make_chart(sq, ProjPoint::from_affine(oracle::v2(1, 0)), std::nullopt,
                         ProjPoint::from_affine(oracle::v2(1, 1)));
            }),
            ErrorCode::SegmentNotInterior);
}

TEST(Chart, OrbitHullAtLimitPointHasProperShadow) {
  const ConvexBody b = make_example("sl5_orbit_hull(40)");
  const ParabolicChart c = make_chart(b, ProjPoint(Vec::Unit(5, 0)));
  int inside = 0, outside = 0;
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const Vec u = 4.0 * rng.normal_vector(3);
    if (boundary_graph(c, u)) ++inside;
    else ++outside;
  }
  EXPECT_GT(inside, 0);
  EXPECT_GT(outside, 0);
}

TEST(Height, ParaboloidValues) {
  const auto& c = parab_chart();
  EXPECT_NEAR(horosphere_height(c, paraboloid_point(1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(horosphere_height(c, paraboloid_point(3, 2)), 1.0, 1e-12);
  EXPECT_NEAR(horosphere_height(c, paraboloid_point(0.5, 1)), 0.0, 1e-12);
}

TEST(Height, VerticalTranslationAddsItsParameter) {
  const auto& c = parab_chart();
  EXPECT_LT((vertical_translation(c, 0.0).matrix() - Mat::Identity(3, 3)).norm(), 1e-15);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vec X = props::interior_point(parab(), rng);
    const double s = rng.uniform(0, 3);
    const double t = horosphere_height(c, X);
    EXPECT_NEAR(horosphere_height(c, vertical_translation(c, s).apply(ProjPoint(X))), t + s, 1e-9 * std::max(1.0, t + s));
  }
  const Mat As = vertical_translation(c, 0.7).matrix(), At = vertical_translation(c, 1.1).matrix();
  EXPECT_LT((As * At - vertical_translation(c, 1.8).matrix()).norm(), 1e-12);
  // identity on ker H, and lines through p are preserved
  Vec X = oracle::v3(0.3, -2.0, 0.0);
  EXPECT_LT((At * X - X).norm(), 1e-15);
}

TEST(Height, TranslatedGraphIsInterior) {
  const auto& c = parab_chart();
  for (int i = 0; i < 100; ++i) {
    const double u = -4.0 + 8.0 * i / 99.0;
    const Vec G = chart_lift(c, oracle::v2(u, 0.5 * u * u));
    const Vec img = vertical_translation(c, 0.25).apply(G);
    EXPECT_EQ(locate(parab(), parab().normalize_or_throw(ProjPoint(img)), 1e-12), Location::Interior);
  }
}

TEST(Height, StabilizerScalesLevelsByTau) {
  const auto& c = parab_chart();
  std::mt19937_64 g(2);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Stab s = random_stabilizer(g);
    EXPECT_NEAR(tau(c, ProjMap(s.B)), s.tau, 1e-9 * s.tau);
    const Vec X = props::interior_point(parab(), rng);
    const double h0 = horosphere_height(c, X);
    EXPECT_NEAR(horosphere_height(c, ProjPoint(s.B * X)), s.tau * h0, 1e-9 * std::max(1.0, s.tau * h0));
    // conjugating the vertical flow rescales its time
    const Mat conj = s.B * vertical_translation(c, 0.6).matrix() * s.B.inverse();
    EXPECT_TRUE(same_projective(conj, vertical_translation(c, s.tau * 0.6).matrix(), 1e-9));
  }
}

TEST(Displacement, HomomorphismAndSpecialValues) {
  const auto& c = parab_chart();
  EXPECT_EQ(displacement(c, ProjMap(translation(0.8))), 0.0);
  EXPECT_NEAR(displacement(c, ProjMap(Mat(oracle::v3(2, 1, 0.5).asDiagonal()))), std::log(4.0), 1e-12);
  // against the translation length of the same boost
  EXPECT_NEAR(std::abs(displacement(c, ProjMap(dilation(1.7)))),
              classify(parab(), ProjMap(dilation(1.7))).translation_length, 1e-9);
  std::mt19937_64 g(4);
  for (int i = 0; i < 50; ++i) {
    const Stab a = random_stabilizer(g), b = random_stabilizer(g);
    const double lhs = displacement(c, ProjMap(a.B * b.B));
    EXPECT_NEAR(lhs, displacement(c, ProjMap(a.B)) + displacement(c, ProjMap(b.B)), 1e-9);
  }
  Mat swap(3, 3);
  swap << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  EXPECT_EQ(code_of([&] { displacement(c, ProjMap(swap)); }), ErrorCode::NotInStabilizer);
}

TEST(Busemann, ParaboloidKnownValues) {
  const ProjPoint p(Vec::Unit(3, 0));
  const BusemannResult b1 = busemann(parab(), p, paraboloid_point(1, 0));
  EXPECT_NEAR(b1.value, 0.0, 1e-4);
  const BusemannResult be = busemann(parab(), p, paraboloid_point(std::numbers::e, 0));
  EXPECT_NEAR(be.value, -1.0, 1e-4);
  for (size_t i = 1; i < be.sequence.size(); ++i) EXPECT_LE(be.sequence[i], be.sequence[i - 1] + 1e-12);
}

TEST(Busemann, AgreesWithIndependentQuadraticFormLimit) {
  // d(q, gamma(T)) - T evaluated with the closed-form ellipsoid distance at large T
  const Mat Q = *parab().quadratic_form();
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const double u = rng.uniform(-1, 1), x0 = 0.5 * u * u + rng.uniform(0.1, 3.0);
    const Vec q = oracle::v3(x0, u, 1.0);
    const double T = 20.0;
    const double ref = oracle::ellipsoid_hilbert(Q, q, oracle::v3(std::exp(T), 0, 1)) - T;
    EXPECT_NEAR(busemann(parab_chart(), ProjPoint(q)).value, ref, 1e-4);
    EXPECT_NEAR(busemann_closed_form(parab_chart(), ProjPoint(q)), -std::log(oracle::paraboloid_gap(oracle::v2(x0, u))),
                1e-12);
  }
}

TEST(Busemann, OneLipschitz) {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const Vec X = props::interior_point(parab(), rng), Y = props::interior_point(parab(), rng);
    const double bx = busemann(parab_chart(), ProjPoint(X)).value, by = busemann(parab_chart(), ProjPoint(Y)).value;
    EXPECT_LE(std::abs(bx - by), hilbert_distance(parab(), X, Y) + 1e-6);
  }
}

TEST(Busemann, RejectsCornerPoints) {
  const ConvexBody sq = make_example("square");
  EXPECT_EQ(code_of([&] { busemann(sq, ProjPoint::from_affine(oracle::v2(1, 1)), ProjPoint::from_affine(oracle::v2(0, 0))); }),
            ErrorCode::NotC1Point);
}

TEST(Horoballs, ConvexAndRadiallyInjective) {
  for (const char* name : {"paraboloid(2)", "klein_ball(2)"}) {
    const ConvexBody b = make_example(name);
    const ParabolicChart c = name[0] == 'p' ? parab_chart() : make_chart(b, ProjPoint::from_affine(oracle::v2(0, 1)));
    Rng rng(11);
    const double t = 0.3;
    std::vector<Vec> inside;
    while (inside.size() < 40) {
      const Vec X = sample_interior(b, rng);
      if (horosphere_height(c, X) >= t) inside.push_back(X);
    }
    for (size_t i = 0; i + 1 < inside.size(); ++i)
      EXPECT_GE(horosphere_height(c, Vec(0.5 * (inside[i] + inside[i + 1]))), t - 1e-9) << name;

    std::vector<Vec> us;
    for (int k = 0; k < 20; ++k) us.push_back(Vec::Constant(1, -2.0 + 0.2 * k));
    const auto pts = horosphere_points(c, t, us);
    ASSERT_EQ(pts.size(), us.size());
    for (size_t k = 0; k < pts.size(); ++k) {
      EXPECT_NEAR(horosphere_height(c, pts[k]), t, 1e-9) << name;
      EXPECT_NEAR(chart_coordinates(c, pts[k])(0), us[k](0), 1e-9) << name;
    }
  }
}

TEST(Horoballs, VerticalRaysContract) {
  const auto& c = parab_chart();
  double prev = 1e300;
  for (double s = 1.0; s <= 1e10; s *= 4.0) {
    const Vec a = chart_lift(c, oracle::v2(-0.5, s)), b = chart_lift(c, oracle::v2(0.7, s + 0.5 * (0.49 - 0.25)));
    const double d = hilbert_distance(parab(), a, b);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Horoballs, DistanceBetweenHorospheresIsConstant) {
  const auto& c = parab_chart();
  const double t = 0.4, s = 2.5;
  for (int k = 0; k < 20; ++k) {
    const double u = -2.0 + 0.2 * k, f = 0.5 * u * u;
    const double d = hilbert_distance(parab(), chart_lift(c, oracle::v2(u, f + t)), chart_lift(c, oracle::v2(u, f + s)));
    EXPECT_NEAR(d, std::log(s / t), 1e-6);
  }
}

TEST(TranslationGroup, MatrixAndGroupLaw) {
  EXPECT_LT((translation_group_element(Vec::Zero(2)).matrix() - Mat::Identity(4, 4)).norm(), 1e-15);
  const ProjPoint img = translation_group_element(oracle::v2(1, 0)).apply(ProjPoint(Vec::Unit(4, 3)));
  const Vec a = img.affine();
  EXPECT_NEAR(a(0), 0.5, 1e-15);
  EXPECT_NEAR(a(1), 1.0, 1e-15);
  EXPECT_NEAR(a(2), 0.0, 1e-15);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Vec u = rng.normal_vector(3), v = rng.normal_vector(3);
    const Mat lhs = translation_group_element(u).matrix() * translation_group_element(v).matrix();
    EXPECT_LT((lhs - translation_group_element(Vec(u + v)).matrix()).norm(), 1e-12);
  }
}

TEST(Demo, OrbitOnParaboloidAndBallImage) {
  std::vector<Vec> line;
  for (int k = -2; k <= 2; ++k) line.push_back(Vec::Constant(1, k));
  const auto r1 = ellipsoid_characterization_demo(1, line);
  EXPECT_EQ(r1.points, 5);
  EXPECT_LE(r1.paraboloid_residual, 1e-12);
  EXPECT_LE(r1.sphere_residual, 1e-9);

  Rng rng(3);
  std::vector<Vec> cloud;
  for (int i = 0; i < 100; ++i) cloud.push_back(rng.normal_vector(3));
  const auto r3 = ellipsoid_characterization_demo(3, cloud);
  EXPECT_LE(r3.paraboloid_residual, 1e-12);
  EXPECT_LE(r3.sphere_residual, 1e-9);
  EXPECT_LE(r3.transitivity_residual, 1e-12);
  EXPECT_GT(r3.hull_vertices, 0);
  const json j = to_json(r3);
  EXPECT_EQ(j.at("n"), 3);
}

TEST(Demo, BallMapCarriesParaboloidToSphere) {
  // independent check of the projective map on random paraboloid boundary points
  const Mat M = paraboloid_to_ball(2).matrix();
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Vec u = rng.normal_vector(2);
    Vec X(4);
    X << 0.5 * u.squaredNorm(), u(0), u(1), 1.0;
    const Vec Y = M * X;
    EXPECT_NEAR(Y.head(3).norm() / std::abs(Y(3)), 1.0, 1e-9);
  }
}
