#include "hilbert/hilbert.hpp"
#include "property_suites.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
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

Mat so21_parabolic() {
  Mat A(3, 3);
  A << 1, 1, 0.5, 0, 1, 1, 0, 0, 1;
  return A;
}

// X -> A X A^T on symmetric 3x3 matrices, in upper-triangle row-major coordinates.
Mat symmetric_square(const Mat& A) {
  const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  Mat S(6, 6);
  for (int c = 0; c < 6; ++c) {
    Mat E = Mat::Zero(3, 3);
    E(idx[c][0], idx[c][1]) = 1.0;
    E(idx[c][1], idx[c][0]) = 1.0;
    const Mat img = A * E * A.transpose();
    for (int r = 0; r < 6; ++r) S(r, c) = img(idx[r][0], idx[r][1]);
  }
  return S;
}

}  // namespace

TEST(Preserves, Examples) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(1);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(preserves(k, ProjMap(oracle::random_lorentz(2, g))));
  EXPECT_FALSE(preserves(k, ProjMap(Mat(oracle::v3(2, 1, 1).asDiagonal()))));
  const ConvexBody hex = make_example("hex_simplex");
  EXPECT_TRUE(preserves(hex, ProjMap(Mat(oracle::v3(2, 0.25, 2).asDiagonal()))));
  EXPECT_FALSE(preserves(hex, ProjMap(so21_parabolic())));
  // sampled path for oracle bodies
  const ConvexBody cone = make_example("cone_over_disc");
  Mat R = Mat::Identity(4, 4);
  R(0, 0) = R(1, 1) = 0.0;
  R(0, 1) = -1.0;
  R(1, 0) = 1.0;
  EXPECT_TRUE(preserves(cone, ProjMap(R)));
}

TEST(Classify, IdentityIsElliptic) {
  const auto c = classify(make_example("klein_ball(2)"), ProjMap::identity(3));
  EXPECT_EQ(c.kind, IsometryKind::Elliptic);
  EXPECT_EQ(c.translation_length, 0.0);
  ASSERT_TRUE(c.certificate.interior_fixed_point.has_value());
}

TEST(Classify, BoostWithEigenvaluesTwoOneHalf) {
  const ConvexBody k = make_example("klein_ball(2)");
  const ProjMap B(oracle::boost(2, std::log(2.0)));
  const auto c = classify(k, B);
  EXPECT_EQ(c.kind, IsometryKind::Hyperbolic);
  EXPECT_NEAR(c.translation_length, std::log(4.0), 1e-12);
  ASSERT_TRUE(c.axis.has_value());
  const Vec e1 = c.axis->x_minus.affine(), e2 = c.axis->x_plus.affine();
  EXPECT_NEAR(std::abs(e1(0)), 1.0, 1e-9);
  EXPECT_NEAR(e1(1), 0.0, 1e-9);
  EXPECT_NEAR(e1(0) + e2(0), 0.0, 1e-9);
}

TEST(Classify, So21ParabolicFixesOneBoundaryPoint) {
  const ConvexBody P = make_example("paraboloid(2)");
  const auto c = classify(P, ProjMap(so21_parabolic()));
  EXPECT_EQ(c.kind, IsometryKind::Parabolic);
  EXPECT_EQ(c.translation_length, 0.0);
  EXPECT_FALSE(c.certificate.interior_fixed_point.has_value());
  int found = 0;
  for (const auto& fs : c.fixed_sets)
    for (const auto& p : fs.points) {
      EXPECT_LT((p.canonical() - Vec::Unit(3, 0)).norm(), 1e-9);
      ++found;
    }
  EXPECT_GE(found, 1);
  for (const double m : c.certificate.moduli) EXPECT_NEAR(m, 1.0, 1e-7);
}

TEST(Classify, RotationIsEllipticWithCertifiedFixedPoint) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(2);
  const Mat C = oracle::random_lorentz(2, g);
  const Mat R = oracle::embed_rotation(oracle::rotation(2, g));
  const auto c = classify(k, ProjMap(C * R * C.inverse()));
  EXPECT_EQ(c.kind, IsometryKind::Elliptic);
  ASSERT_TRUE(c.certificate.interior_fixed_point.has_value());
  EXPECT_LE(displacement_at(k, C * R * C.inverse(), *c.certificate.interior_fixed_point), 1e-8);
}

TEST(Classify, NonIsometryRejected) {
  EXPECT_EQ(code_of([] { classify(make_example("klein_ball(2)"), ProjMap(Mat(oracle::v3(2, 1, 1).asDiagonal()))); }),
            ErrorCode::NotAnIsometry);
}

TEST(Classify, KindsAgreeWithSpectralDefinition) {
  std::mt19937_64 g(7);
  const ConvexBody k = make_example("klein_ball(2)");
  for (int i = 0; i < 40; ++i) {
    const Mat A = oracle::random_lorentz(2, g, 1.5);
    const auto c = classify(k, ProjMap(A));
    const Spectrum s = spectrum(A);
    double lo = 1e300, hi = 0.0;
    for (const auto& e : s.eigenvalues) {
      lo = std::min(lo, std::abs(e.value));
      hi = std::max(hi, std::abs(e.value));
    }
    if (c.kind == IsometryKind::Hyperbolic) EXPECT_NEAR(c.translation_length, std::log(hi / lo), 1e-9);
    if (c.kind == IsometryKind::Elliptic) EXPECT_TRUE(c.certificate.interior_fixed_point.has_value());
  }
}

TEST(Hyperbolic, AxisDisplacementAndTwoFixedPoints) {
  std::mt19937_64 g(9);
  for (int n : {2, 3}) {
    const ConvexBody k = make_example("klein_ball(" + std::to_string(n) + ")");
    for (int i = 0; i < 10; ++i) {
      const auto h = oracle::random_hyperbolic(n, g);
      const auto c = classify(k, ProjMap(h.A));
      ASSERT_EQ(c.kind, IsometryKind::Hyperbolic);
      EXPECT_NEAR(c.translation_length, h.t, 1e-9);
      ASSERT_TRUE(c.axis.has_value());
      int boundary_points = 0;
      for (const auto& fs : c.fixed_sets) {
        EXPECT_GT(fs.eigenvalue, 0.0);
        boundary_points += static_cast<int>(fs.points.size());
      }
      EXPECT_EQ(boundary_points, 2);
      const Vec a = k.normalize_or_throw(c.axis->x_minus), b = k.normalize_or_throw(c.axis->x_plus);
      for (double s : {0.2, 0.5, 0.8}) EXPECT_NEAR(displacement_at(k, h.A, props::lerp(a, b, s)), h.t, 1e-8);
      Rng rng(static_cast<std::uint64_t>(i));
      for (int j = 0; j < 20; ++j) EXPECT_GE(displacement_at(k, h.A, props::interior_point(k, rng)), h.t - 1e-8);
    }
  }
}

TEST(Hyperbolic, DisplacementUnboundedAlongEscapingSequence) {
  const ConvexBody k = make_example("klein_ball(2)");
  const Mat B = oracle::boost(2, 0.5);
  double prev = 0.0;
  for (int j = 1; j <= 30; ++j) {
    const double d = displacement_at(k, B, oracle::homog(oracle::v2(0.0, 1.0 - std::pow(2.0, -j))));
    EXPECT_GE(d, prev - 1e-9);
    prev = d;
  }
  EXPECT_GT(prev, 10.0);
}

TEST(Empirical, BoostWithinWindowAndMonotoneHistory) {
  const ConvexBody k = make_example("klein_ball(2)");
  const ProjMap B(oracle::boost(2, std::log(2.0)));
  const auto e = empirical_translation_length(k, B, 2000, 1);
  EXPECT_GE(e.estimate, std::log(4.0) - 1e-3);
  EXPECT_LE(e.estimate, std::log(4.0) + 1e-2);
  for (size_t i = 1; i < e.history.size(); ++i) EXPECT_LE(e.history[i], e.history[i - 1]);
  // argmin lies near the axis y = 0
  EXPECT_LT(std::abs(ProjPoint(e.argmin).affine()(1)), 0.05);
}

TEST(Empirical, ParabolicEstimatesShrinkWithBudget) {
  const ConvexBody P = make_example("paraboloid(2)");
  double prev = 1e300;
  for (long budget : {100L, 400L, 1600L, 6400L}) {
    const double est = empirical_translation_length(P, ProjMap(so21_parabolic()), budget, 3).estimate;
    EXPECT_LE(est, prev);
    prev = est;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Empirical, IdentityIsZero) {
  const auto e = empirical_translation_length(make_example("square"), ProjMap::identity(3), 100, 1);
  EXPECT_EQ(e.estimate, 0.0);
}

TEST(Jnf, So21ParabolicPasses) {
  const JnfReport r = parabolic_jnf_check(ProjMap(so21_parabolic()));
  EXPECT_EQ(r.index_one, 3);
  EXPECT_TRUE(r.odd);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.o_n1_conditions.has_value());
  EXPECT_TRUE(*r.o_n1_conditions);
}

TEST(Jnf, SymmetricSquareOfJordanBlock) {
  Mat J(3, 3);
  J << 1, 1, 0, 0, 1, 1, 0, 0, 1;
  const Mat S = symmetric_square(J);
  const JnfReport r = parabolic_jnf_check(ProjMap(S));
  EXPECT_EQ(r.index_one, 5);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].blocks, (std::vector<int>{5, 1}));
  EXPECT_TRUE(r.pass);
  // it acts on the positive-definite cone as a parabolic
  EXPECT_EQ(classify(make_example("pos_cone(3)"), ProjMap(S)).kind, IsometryKind::Parabolic);
}

TEST(Jnf, EvenBlockFailsParity) {
  Mat A(3, 3);
  A << 1, 1, 0, 0, 1, 0, 0, 0, 1;
  const JnfReport r = parabolic_jnf_check(ProjMap(A));
  EXPECT_EQ(r.index_one, 2);
  EXPECT_FALSE(r.pass);
}

TEST(Jnf, RejectsNonUnitSpectrum) {
  EXPECT_EQ(code_of([] { parabolic_jnf_check(ProjMap(oracle::boost(2, 0.3))); }), ErrorCode::NotUnitModulus);
}

TEST(Pencil, BoostCenterIsMeetOfTangentLines) {
  const ConvexBody k = make_example("klein_ball(2)");
  const Mat B = oracle::boost(2, std::log(2.0));
  const Pencil p = invariant_pencil(k, ProjMap(B));
  ASSERT_EQ(p.center.cols(), 1);
  // tangent lines x = 1 and x = -1 meet at [0 : 1 : 0]
  EXPECT_NEAR(std::abs(p.center(1, 0)), 1.0, 1e-9);
  EXPECT_TRUE(p.no_fixed_fiber);
  EXPECT_NEAR(std::abs(p.shift), std::log(4.0), 1e-9);
  // the supporting hyperplanes at the fixed points are invariant
  const Mat D = dual_action(ProjMap(B)).matrix();
  for (const auto* H : {&p.H_plus, &p.H_minus}) {
    const Vec img = D * H->covector();
    EXPECT_LT((ProjHyperplane(img).canonical() - H->canonical()).norm(), 1e-9);
  }
  for (const auto& f : p.fibers) {
    const ProjHyperplane img(D * f.covector());
    EXPECT_GT((img.canonical() - f.canonical()).norm(), 1e-6);
  }
}

TEST(Pencil, ProjectionToAxisIsDistanceNonIncreasing) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(4);
  const auto h = oracle::random_hyperbolic(2, g);
  const Pencil p = invariant_pencil(k, ProjMap(h.A));
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec X = props::interior_point(k, rng), Y = props::interior_point(k, rng);
    const double before = hilbert_distance(k, X, Y);
    const double after = hilbert_distance(k, pencil_projection(k, p, X), pencil_projection(k, p, Y));
    EXPECT_LE(after, before + 1e-9);
  }
  // the fibre coordinate moves by the shift under A
  const Vec X = props::interior_point(k, rng);
  EXPECT_NEAR(pencil_coordinate(p, props::push(k, h.A, X)) - pencil_coordinate(p, X), p.shift, 1e-9);
}

TEST(Pencil, RequiresHyperbolic) {
  EXPECT_EQ(code_of([] { invariant_pencil(make_example("paraboloid(2)"), ProjMap(so21_parabolic())); }),
            ErrorCode::NotHyperbolic);
}

TEST(Json, KindAndCertificate) {
  const auto c = classify(make_example("klein_ball(2)"), ProjMap(oracle::boost(2, std::log(2.0))));
  const json j = to_json(c);
  EXPECT_EQ(j.at("kind"), "hyperbolic");
  EXPECT_NEAR(j.at("t").get<double>(), std::log(4.0), 1e-12);
  EXPECT_TRUE(j.contains("certificate"));
}
