#include <cmath>

#include <gtest/gtest.h>

#include "squeeze/ball_geometry.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

using namespace squeeze;

namespace {

PointCn random_in_ball(Rng& rng, Eigen::Index n) { return rng.ball(n, 1.0) * 0.999; }

}  // namespace

TEST(Psi, SendsAxisPointToOrigin) {
  for (double r : {0.0, 0.3, 0.9, 1.0 - 1e-6}) {
    for (Eigen::Index n : {1, 2, 3}) {
      PointCn a = PointCn::Zero(n);
      a[0] = r;
      EXPECT_LE(psi_apply(r, a).norm(), 1e-14) << "r=" << r << " n=" << n;
    }
  }
}

TEST(Psi, OriginAtZeroRadiusIsFixed) {
  const PointCn z = point({{0.2, 0.1}, {-0.3, 0.4}});
  EXPECT_LE((psi_apply(0.0, z) - z).norm(), 1e-15);
}

TEST(Psi, RejectsOutsideBall) {
  EXPECT_THROW(psi_apply(0.5, point({1.0, 0.0})), DomainError);
  EXPECT_THROW(psi_apply(1.0, point({0.0})), DomainError);
  EXPECT_THROW(psi_invert(0.5, point({1.2})), DomainError);
}

TEST(PsiProperty, RoundTripAndImageInBall) {
  Rng rng(101);
  for (int i = 0; i < 3000; ++i) {
    const Eigen::Index n = 1 + i % 3;
    const double r = rng.uniform(0.0, 0.999);
    const PointCn z = random_in_ball(rng, n);
    const PointCn w = psi_apply(r, z);
    ASSERT_LT(w.norm(), 1.0);
    ASSERT_LE((psi_invert(r, w) - z).norm(), 1e-12) << "r=" << r;
  }
}

TEST(PsiProperty, BoundaryDistortion) {
  Rng rng(7);
  for (double delta : {1e-3, 1e-6}) {
    for (int i = 0; i < 500; ++i) {
      const double r = rng.uniform(0.0, 0.95);
      const PointCn z = rng.sphere(2) * (1.0 - delta);
      const PointCn w = psi_apply(r, z);
      ASSERT_LT(w.norm(), 1.0);
      ASSERT_LE(1.0 - w.norm(), delta * (1.0 + r) / (1.0 - r) * (1.0 + 1e-6));
    }
  }
}

TEST(NormIdentity, FixedExample) {
  const auto id = norm_psi_identity(0.9, point({{0.3, 0.2}, {-0.4, 0.0}}));
  EXPECT_NEAR(id.lhs, id.rhs, 1e-12);
}

TEST(NormIdentityProperty, NearBoundaryRadius) {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double r = i % 5 == 0 ? 1.0 - 1e-6 : rng.uniform(0.0, 1.0 - 1e-6);
    const auto id = norm_psi_identity(r, random_in_ball(rng, 1 + i % 3));
    ASSERT_NEAR(id.lhs, id.rhs, 1e-12);
  }
}

TEST(UnitaryAlign, AlignsAndIsUnitary) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const PointCn p = rng.ball(3, 1.0);
    const UnitaryMatrix u = unitary_align(p);
    EXPECT_TRUE(is_unitary(u));
    PointCn target = PointCn::Zero(3);
    target[0] = p.norm();
    EXPECT_LE((u * p - target).norm(), 1e-13);
  }
  EXPECT_THROW(unitary_align(PointCn::Zero(2)), DomainError);
}

TEST(BallAutomorphism, CenteringSendsPointToOrigin) {
  const PointCn a = point({{0.1, 0.5}, {-0.2, 0.3}});
  const auto m = BallAutomorphism::centering(a);
  EXPECT_LE(m.apply(a).norm(), 1e-14);
  const PointCn z = point({{0.3, -0.1}, {0.0, 0.2}});
  EXPECT_LE((m.invert(m.apply(z)) - z).norm(), 1e-13);
}

TEST(KobayashiBall, HalfAxisOracle) {
  EXPECT_NEAR(kobayashi_ball(point({0.0, 0.0}), point({0.5, 0.0})), 0.5 * std::log(3.0), 1e-12);
  EXPECT_NEAR(kobayashi_ball(point({0.0, 0.0}), point({0.5, 0.0})), 0.5493061443, 1e-10);
  EXPECT_DOUBLE_EQ(kobayashi_ball_radial(0.0), 0.0);
}

TEST(KobayashiBallProperty, InvarianceAndTriangle) {
  Rng rng(5);
  int violations = 0;
  for (int i = 0; i < 300; ++i) {
    const PointCn a = random_in_ball(rng, 2), b = random_in_ball(rng, 2), c = random_in_ball(rng, 2);
    const auto m = BallAutomorphism::centering(random_in_ball(rng, 2));
    ASSERT_NEAR(kobayashi_ball(m.apply(a), m.apply(b)), kobayashi_ball(a, b), 1e-10);
    if (kobayashi_ball(a, c) > kobayashi_ball(a, b) + kobayashi_ball(b, c) + 1e-12) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Confinement, RadiusAtUnitConstant) {
  EXPECT_NEAR(confinement_radius(KobayashiConstant(1.0), 0.1, Confinement::proved), 1.0 - 0.1 / std::exp(2.0), 1e-15);
  EXPECT_NEAR(confinement_radius(KobayashiConstant(1.0), 0.1, Confinement::proved), 0.98646647, 1e-8);
  EXPECT_NEAR(confinement_radius(KobayashiConstant(2.0), 0.1, Confinement::stated), 0.95, 1e-15);
}

TEST(SphereImageBound, ZeroRadiusLeavesSphereFixed) {
  const auto rep = lemma25_bound(KobayashiConstant(1.0), 0.01, 0.001, 0.0, 1000);
  EXPECT_NEAR(rep.stats.min_norm, 1.0 - 2.0 * 0.01 * 0.001, 1e-14);
  EXPECT_TRUE(rep.pass());
}

TEST(SphereImageBound, SweepAtStatedRadius) {
  const auto rep = lemma25_bound(KobayashiConstant(2.0), 1.0 / 40.0, 0.001, 1.0 - 0.001 / 2.0, 10000);
  EXPECT_TRUE(rep.pass()) << "margin " << rep.margin;
  EXPECT_GE(rep.intermediate_margin, 0.0);
}

TEST(SphereImageBound, ExponentialConstantVersionHolds) {
  Lemma25Options o;
  o.confinement = Confinement::proved;
  const KobayashiConstant c(1.0);
  const double k = confinement_constant(c, Confinement::proved);
  const auto rep = lemma25_bound(c, 1.0 / (18.0 * k), 0.01, confinement_radius(c, 0.01, Confinement::proved), 2000, o);
  EXPECT_TRUE(rep.pass()) << "margin " << rep.margin;
}

// Radius 1 - d/e^2 with the target 1 - 6 C eps (C = 1, eps = 0.05): the
// real-axis point falls well inside the target circle.
TEST(SphereImageBound, MixedReadingFailsOnRealAxis) {
  const double c = 1.0, eps = 0.05, d = 0.01;
  const double r = 1.0 - d / std::exp(2.0);
  const auto st = sphere_image_min(r, eps, d, 100, 2, 1);
  const double t = 1.0 - 2.0 * eps * d;
  const double exact = (t - r) / (1.0 - t * r);
  EXPECT_NEAR(st.min_norm, exact, 1e-12);
  EXPECT_LT(st.min_norm - (1.0 - 6.0 * c * eps), 0.0);
}

TEST(SphereImageBound, Preconditions) {
  const KobayashiConstant c(1.0);
  EXPECT_THROW(lemma25_bound(c, 0.1, 0.01, 0.0, 10), ConfigError);          // eps > 1/18
  EXPECT_THROW(lemma25_bound(c, 0.01, 0.01, 0.999, 10), ConfigError);       // r beyond 1 - d
  EXPECT_THROW(lemma25_bound(c, 0.01, -1.0, 0.0, 10), ConfigError);
  EXPECT_NO_THROW(lemma25_bound(c, 1.0 / 18.0, 0.01, 0.0, 10));
}
