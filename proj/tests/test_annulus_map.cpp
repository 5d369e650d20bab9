#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "squeeze/annulus_map.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

using namespace squeeze;

TEST(AnnulusMap, StandardAnnulusModulus) {
  const AnnulusMap m(annulus(0.3, 1.0), 256);
  EXPECT_NEAR(m.modulus(), 0.3, 1e-10);
  EXPECT_LT(m.boundary_residual(), 1e-10);
  EXPECT_NEAR(m.period(), 2.0 * std::numbers::pi / -std::log(0.3), 1e-8);
  // identity up to rotation
  for (double r : {0.35, 0.5, 0.9}) EXPECT_NEAR(std::abs(m.forward(r)), r, 1e-10);
}

TEST(AnnulusMap, ScaleAndTranslationInvariance) {
  const AnnulusMap m(annulus(0.6, 2.0, Complex(0.5, -0.2)), 256);
  EXPECT_NEAR(m.modulus(), 0.3, 1e-10);
}

TEST(AnnulusMap, EccentricRingClosedForm) {
  // {|z| < 1} minus {|z - 0.2| <= 0.3}: the disc automorphism z -> (z - a)/(1 - a z)
  // with a = (1 + c^2 - r^2 - sqrt(...))/(2c) makes the circles concentric.
  const double c = 0.2, r = 0.3;
  const double s = 1.0 + c * c - r * r;
  const double a = (s - std::sqrt(s * s - 4.0 * c * c)) / (2.0 * c);
  const double inner = std::abs((c + r - a) / (1.0 - a * (c + r)));
  ClosedCurve::Sampling smp;
  smp.base = 1024;
  std::vector<ClosedCurve> holes;
  holes.push_back(ClosedCurve::circle(c, r, false, smp));
  const PlanarDomain dom(ClosedCurve::circle(0.0, 1.0, true, smp), std::move(holes), Smoothness::Cinf);
  const AnnulusMap m(dom, 512);
  EXPECT_NEAR(m.modulus(), inner, 1e-8);
}

TEST(AnnulusMap, RejectsWrongConnectivityAndNodes) {
  EXPECT_THROW(AnnulusMap(unit_disc(), 256), ConfigError);
  EXPECT_THROW(AnnulusMap(annulus(0.3, 1.0), 100), ConfigError);
}

TEST(AnnulusMapProperty, RoundTripAndBoundaryCorrespondence) {
  const PlanarDomain dom = build_omega_prime();
  const AnnulusMap m(dom, 512);
  const Domain d = dom;
  for (const auto& z : interior_samples(d, 60, 41)) {
    const Complex w = m.forward(z[0]);
    ASSERT_GT(std::abs(w), m.modulus());
    ASSERT_LT(std::abs(w), 1.0);
    ASSERT_LE(std::abs(m.backward(w) - z[0]), 1e-6);
  }
  for (const auto& b : boundary_samples(d, 100, 43)) {
    const double aw = std::abs(m.forward(b[0]));
    ASSERT_TRUE(std::abs(aw - 1.0) < 1e-4 || std::abs(aw - m.modulus()) < 1e-4) << aw;
  }
  EXPECT_THROW(m.backward(0.1), DomainError);
}

TEST(AnnulusMapProperty, DeficitIsAccurateNearOuterCurve) {
  const AnnulusMap m(annulus(0.3, 1.0), 256);
  for (double s : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const double x = 1.0 - s;
    EXPECT_NEAR(m.deficit(x) / (1.0 - x), 1.0, 1e-6) << "s=" << s;
  }
  const AnnulusMap op(build_omega_prime(), 512);
  const double r20 = op.deficit(0.1 * std::ldexp(1.0, -20)) / (0.1 * std::ldexp(1.0, -20));
  const double r30 = op.deficit(0.1 * std::ldexp(1.0, -30)) / (0.1 * std::ldexp(1.0, -30));
  EXPECT_NEAR(r20, r30, 1e-4 * r30);
}

TEST(AnnulusMapProperty, OmegaPrimeModulusStableUnderDoubling) {
  const PlanarDomain dom = build_omega_prime();
  const double a = AnnulusMap(dom, 512).modulus();
  const double b = AnnulusMap(dom, 1024).modulus();
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, 1.0);
  EXPECT_NEAR(a, b, 1e-6);
}
