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

}  // namespace

TEST(Ball, CyclicGroup) {
  const GroupBall b = enumerate_ball({ProjMap(oracle::boost(2, 0.4))}, 3);
  EXPECT_EQ(b.elements.size(), 7u);
  EXPECT_TRUE(same_map(b.elements[0], ProjMap::identity(3)));
  EXPECT_EQ(b.lengths[0], 0);
  EXPECT_EQ(b.generators.size(), 2u);
}

TEST(Ball, FreeishAndCommutingPairs) {
  std::mt19937_64 g(3);
  const GroupBall free_pair =
      enumerate_ball({ProjMap(oracle::random_lorentz(2, g, 2.0)), ProjMap(oracle::random_lorentz(2, g, 2.0))}, 2);
  EXPECT_LE(free_pair.elements.size(), 17u);
  EXPECT_GE(free_pair.elements.size(), 13u);
  const GroupBall commuting =
      enumerate_ball({ProjMap(Mat(oracle::v3(2, 1, 0.5).asDiagonal())), ProjMap(Mat(oracle::v3(1, 3, 1.0 / 3).asDiagonal()))}, 2);
  EXPECT_EQ(commuting.elements.size(), 13u);
}

TEST(Ball, ClosedUnderInverseAndDeduplicatedUpToSign) {
  const ProjMap a(oracle::boost(2, 0.3));
  const GroupBall b = enumerate_ball({a, a.negated()}, 3);
  EXPECT_EQ(b.elements.size(), 7u);
  for (const auto& e : b.elements) {
    bool found = false;
    for (const auto& f : b.elements) found = found || same_map(e.inverse(), f);
    EXPECT_TRUE(found || b.lengths.back() == 3);
  }
}

TEST(Ball, ExplosionGuard) {
  std::mt19937_64 g(5);
  std::vector<ProjMap> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(ProjMap(oracle::random_lorentz(2, g, 2.0)));
  EXPECT_EQ(code_of([&] { enumerate_ball(gens, 8, BallOptions{2000, 1e-9}); }), ErrorCode::ExplosionGuard);
}

TEST(Injectivity, BoostOnAndOffAxis) {
  const ConvexBody k = make_example("klein_ball(2)");
  const GroupBall b = enumerate_ball({ProjMap(oracle::boost(2, std::log(2.0)))}, 4);
  EXPECT_NEAR(injectivity_radius_estimate(k, b, k.witness()), std::log(2.0), 1e-9);
  EXPECT_GT(injectivity_radius_estimate(k, b, oracle::homog(oracle::v2(0.2, 0.5))), std::log(2.0));
  const GroupBall trivial = enumerate_ball({ProjMap::identity(3)}, 3);
  EXPECT_TRUE(std::isinf(injectivity_radius_estimate(k, trivial, k.witness())));
  const GroupBall bad = enumerate_ball({ProjMap(Mat(oracle::v3(2, 1, 1).asDiagonal()))}, 1);
  EXPECT_EQ(code_of([&] { injectivity_radius_estimate(k, bad, k.witness()); }), ErrorCode::NotAnIsometry);
}

TEST(ShortSubgroup, ParabolicNearFixedPointAndBoostFarAway) {
  const ConvexBody P = make_example("paraboloid(2)");
  const std::vector<ProjMap> gens = {ProjMap(so21_parabolic())};
  const SmallDisplacement s = small_displacement_point(P, gens, 1e-2);
  const ShortSubgroup sp = short_subgroup(P, enumerate_ball(gens, 4), s.point, 0.1);
  EXPECT_FALSE(sp.short_elements.empty());
  EXPECT_GT(sp.ball.elements.size(), 1u);
  EXPECT_TRUE(sp.all_non_hyperbolic);
  for (const auto k : sp.kinds) EXPECT_EQ(k, IsometryKind::Parabolic);

  const ConvexBody k = make_example("klein_ball(2)");
  const ShortSubgroup sb =
      short_subgroup(k, enumerate_ball({ProjMap(oracle::boost(2, 0.5))}, 4), oracle::homog(oracle::v2(0.0, 0.9)), 0.05);
  EXPECT_TRUE(sb.short_elements.empty());
  EXPECT_EQ(sb.ball.elements.size(), 1u);
}

TEST(CommonFixedPoint, CommutingParabolicsShareBoundaryPointAndCovector) {
  const ConvexBody P = make_example("paraboloid(2)");
  const Mat A = so21_parabolic();
  const CommonFixedPoint c = common_fixed_point(P, {ProjMap(A), ProjMap(Mat(A * A))});
  EXPECT_FALSE(c.interior);
  EXPECT_LT((c.point.canonical() - Vec::Unit(3, 0)).norm(), 1e-9);
  ASSERT_TRUE(c.covector.has_value());
  EXPECT_LT((ProjHyperplane(*c.covector).canonical() - Vec::Unit(3, 2)).norm(), 1e-9);
}

TEST(CommonFixedPoint, TranslationGroupAndIdentity) {
  const ConvexBody P3 = make_example("paraboloid(3)");
  const CommonFixedPoint c = common_fixed_point(
      P3, {translation_group_element(oracle::v2(1, 0)), translation_group_element(oracle::v2(0.3, -2))});
  EXPECT_LT((c.point.canonical() - Vec::Unit(4, 0)).norm(), 1e-9);
  ASSERT_TRUE(c.covector.has_value());
  EXPECT_LT((ProjHyperplane(*c.covector).canonical() - Vec::Unit(4, 3)).norm(), 1e-9);

  const ConvexBody k = make_example("klein_ball(2)");
  const CommonFixedPoint id = common_fixed_point(k, {ProjMap::identity(3)});
  EXPECT_TRUE(id.interior);
}

TEST(CommonFixedPoint, NoneForHyperbolicsWithDifferentAxes) {
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(1);
  const Mat R = oracle::embed_rotation(oracle::rotation(2, g));
  EXPECT_EQ(code_of([&] {
              common_fixed_point(k, {ProjMap(oracle::boost(2, 0.5)), ProjMap(Mat(R * oracle::boost(2, 0.5) * R.transpose()))});
            }),
            ErrorCode::NoneFound);
}

TEST(SmallDisplacement, ParabolicsAndHyperbolicGuard) {
  const ConvexBody P = make_example("paraboloid(2)");
  const SmallDisplacement s = small_displacement_point(P, {ProjMap(so21_parabolic())}, 1e-3);
  EXPECT_LT(displacement_at(P, so21_parabolic(), s.point), 1e-3);

  const ConvexBody P3 = make_example("paraboloid(3)");
  const std::vector<ProjMap> pair = {translation_group_element(oracle::v2(1, 0)), translation_group_element(oracle::v2(0, 1))};
  const SmallDisplacement s2 = small_displacement_point(P3, pair, 1e-2);
  for (const auto& A : pair) EXPECT_LT(displacement_at(P3, A.matrix(), s2.point), 1e-2);

  const ConvexBody k = make_example("klein_ball(2)");
  EXPECT_EQ(code_of([&] { small_displacement_point(k, {ProjMap(oracle::boost(2, 0.5))}, 1e-2); }),
            ErrorCode::HyperbolicPresent);
  EXPECT_EQ(code_of([&] { small_displacement_point(P, {ProjMap(so21_parabolic())}, 1e-12, 5); }),
            ErrorCode::BudgetExhausted);
}

TEST(ThinPart, BoostGivesATubeAroundTheAxis) {
  const ConvexBody k = make_example("klein_ball(2)");
  const GroupBall b = enumerate_ball({ProjMap(oracle::boost(2, 0.2))}, 4);
  const auto pts = thin_part_sample(k, b, 0.3, interior_grid(k, 21));
  int thin = 0;
  for (const auto& p : pts) {
    const Vec a = ProjPoint(p.X).affine();
    // only g and g^-1 can be shortest, so the estimate is the displacement of g in hyperbolic units
    const double expect = oracle::boost_displacement_hyperbolic(a, 0.2);
    EXPECT_NEAR(p.inj, expect, 1e-9);
    if (std::abs(expect - 0.3) > 1e-9) EXPECT_EQ(p.thin, expect < 0.3);
    if (p.thin) {
      ++thin;
      EXPECT_EQ(p.witness_kind, "hyperbolic");
    }
  }
  EXPECT_GT(thin, 0);
  EXPECT_LT(thin, static_cast<int>(pts.size()));
  const std::string csv = thin_part_csv(pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x0,x1,x2,inj_estimate,thin_flag,witness_kind");
}

TEST(ThinPart, ParabolicCuspAndEscapingRay) {
  const ConvexBody P = make_example("paraboloid(2)");
  const GroupBall b = enumerate_ball({ProjMap(so21_parabolic())}, 4);
  const Vec p = P.normalize_or_throw(ProjPoint(Vec::Unit(3, 0))), r = P.witness();
  std::vector<Vec> ray;
  for (int k = 1; k <= 30; ++k) ray.push_back(props::lerp(p, r, std::pow(0.7, 30 - k)));
  const auto pts = thin_part_sample(P, b, 0.3, ray);
  for (size_t i = 1; i < pts.size(); ++i) EXPECT_GT(pts[i].inj, pts[i - 1].inj);
  EXPECT_TRUE(pts.front().thin);
  EXPECT_FALSE(pts.back().thin);
  EXPECT_EQ(pts.front().witness_kind, "parabolic");
}

TEST(ThinPart, TrivialGroupHasNoThinPoints) {
  const ConvexBody k = make_example("klein_ball(2)");
  const auto pts = thin_part_sample(k, enumerate_ball({ProjMap::identity(3)}, 2), 0.3, interior_grid(k, 7));
  for (const auto& p : pts) EXPECT_FALSE(p.thin);
}

TEST(Properties, HullBoundShortRun) {
  for (const char* name : {"klein_ball(2)", "hex_simplex", "square", "paraboloid(2)"}) {
    const auto r = props::hull_bound(make_example(name), 20, 3);
    EXPECT_TRUE(r.ok()) << name << ": " << r.first_failure;
  }
}

TEST(Properties, IsometriesMovingTheOriginLittleHaveBoundedEntries) {
  // for a Lorentz matrix moving the centre a hyperbolic distance rho, |A_ij| <= cosh(rho)
  const ConvexBody k = make_example("klein_ball(2)");
  std::mt19937_64 g(6);
  int seen = 0;
  for (int i = 0; i < 200; ++i) {
    const Mat A = oracle::random_lorentz(2, g, 1.0);
    const double d = displacement_at(k, A, k.witness());
    if (d > 1.0) continue;
    ++seen;
    const Mat M = ProjMap(A).matrix();
    EXPECT_LE(M.cwiseAbs().maxCoeff(), std::cosh(d / 2.0) + 1e-9);
  }
  EXPECT_GT(seen, 10);
}

TEST(Properties, DiscreteGroupsMoveTheWitness) {
  const ConvexBody k = make_example("klein_ball(2)");
  const GroupBall b = enumerate_ball({ProjMap(oracle::boost(2, 0.3)), ProjMap(oracle::boost(2, 0.3).transpose())}, 3);
  double delta = 1e300;
  for (size_t i = 1; i < b.elements.size(); ++i)
    delta = std::min(delta, displacement_at(k, b.elements[i].matrix(), k.witness()));
  EXPECT_GT(delta, 0.1);
}
