#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "conelab/errors.hpp"
#include "conelab/orbit_geometry.hpp"
#include "conelab_reproduce/oracles.hpp"

using namespace conelab;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Weight, UnitPointGivesTheConstant) {
  EXPECT_DOUBLE_EQ(weight_F({1.0, 1.0}, 2), 4.0 * kPi * kPi);
  EXPECT_DOUBLE_EQ(weight_F({2.0, 3.0}, 2), 6.0 * 4.0 * kPi * kPi);
  EXPECT_EQ(weight_F({0.7, 0.0}, 2), 0.0);
  EXPECT_EQ(weight_F({0.7, 0.0}, 5), 0.0);
}

TEST(Weight, SphereConstantMatchesKnownAreas) {
  // |S^1| = 2 pi, |S^2| = 4 pi, |S^3| = 2 pi^2.
  EXPECT_NEAR(sphere_constant(2), std::pow(2 * kPi, 2), 1e-12);
  EXPECT_NEAR(sphere_constant(3), std::pow(4 * kPi, 2), 1e-11);
  EXPECT_NEAR(sphere_constant(4), std::pow(2 * kPi * kPi, 2), 1e-10);
  EXPECT_EQ(weight_F({2.0, 0.5}, 3, WeightScale::Unit), 1.0);
}

TEST(Weight, RejectsNegativeCoordinates) {
  EXPECT_THROW(weight_F({-0.1, 1.0}, 2), DomainError);
  EXPECT_THROW(to_uv({1.0, -1.0}), DomainError);
  EXPECT_THROW(from_uv(0.0, -1e-3), DomainError);
}

TEST(UV, KnownPoints) {
  const UVPoint a = to_uv({1.0, 1.0});
  EXPECT_EQ(a.u, 0.0);
  EXPECT_EQ(a.v, 1.0);
  EXPECT_EQ(a.r, 1.0);
  const UVPoint b = to_uv({1.0, 0.0});
  EXPECT_EQ(b.u, 0.5);
  EXPECT_EQ(b.v, 0.0);
  EXPECT_EQ(b.r, 0.5);
  const UVPoint c = to_uv({2.0, 1.0});
  EXPECT_EQ(c.u, 1.5);
  EXPECT_EQ(c.v, 2.0);
  EXPECT_EQ(c.r, 2.5);

  const Point p = from_uv(0.0, 1.0);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 1.0);
  const Point q = from_uv(1.5, 2.0);
  EXPECT_DOUBLE_EQ(q.x, 2.0);
  EXPECT_DOUBLE_EQ(q.y, 1.0);
  const Point e = from_uv(0.5, 0.0);
  EXPECT_DOUBLE_EQ(e.x, 1.0);
  EXPECT_EQ(e.y, 0.0);
}

TEST(UV, RoundTripsOnTheClosedQuarterPlane) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 3.0);
  for (int k = 0; k < 2000; ++k) {
    Point p{coord(rng), coord(rng)};
    if (k % 10 == 0) p.y = 0.0;
    if (k % 10 == 1) p.x = 0.0;
    if (k % 10 == 2) p.y = p.x;
    const UVPoint uv = to_uv(p);
    EXPECT_NEAR(uv.r * uv.r, uv.u * uv.u + uv.v * uv.v, 1e-12 * uv.r * uv.r + 1e-300);
    const Point back = from_uv(uv);
    const double scale = std::hypot(p.x, p.y);
    EXPECT_NEAR(back.x, p.x, 1e-12 * scale);
    EXPECT_NEAR(back.y, p.y, 1e-12 * scale);

    const UVPoint again = to_uv(from_uv(uv.u, uv.v));
    EXPECT_NEAR(again.u, uv.u, 1e-12 * uv.r + 1e-300);
    EXPECT_NEAR(again.v, uv.v, 1e-12 * uv.r + 1e-300);
  }
}

TEST(Orbit, ReflectsIntoCanonicalForm) {
  const BoundaryOrbit o(3, 1.0, 2.0);
  EXPECT_EQ(o.x0(), 2.0);
  EXPECT_EQ(o.y0(), 1.0);
  EXPECT_TRUE(o.reflected());
  EXPECT_THROW(BoundaryOrbit(1, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(BoundaryOrbit(2, 0.0, 1.0), PreconditionError);
}

TEST(Curve, ValidatesInvariants) {
  EXPECT_THROW(ProfileCurve({0.0, 1.0}, {{1.0, 1.0}, {1.0, 0.5}}), PreconditionError);
  EXPECT_THROW(ProfileCurve({0.0, 0.5, 0.5, 1.0}, {{1, 1}, {1, 0.5}, {1, 0.4}, {1, 0}}),
               PreconditionError);
  EXPECT_THROW(ProfileCurve({0.0, 0.5, 1.0}, {{1, 1}, {1, 0}, {1, 0}}), PreconditionError);
  EXPECT_THROW(ProfileCurve({0.1, 1.0}, {{1, 1}, {1, 0}}), PreconditionError);
  EXPECT_NO_THROW(ProfileCurve({0.0, 1.0}, {{1, 1}, {0, 0}}));
}

TEST(Curve, LengthsOfBaselineCurves) {
  const BoundaryOrbit unit(2, 1.0, 1.0);
  EXPECT_NEAR(length_g(cone_curve(unit, 64)), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(length_g(cylinder_curve(unit, 64)), 1.0, 1e-14);

  // h-length of the cone for n = 2: at arclength s from the apex xy = s^2/2, so
  // L_h = c_2 * integral of s^2/2 over [0, sqrt 2] = c_2 sqrt(2)/3.
  const double exact = sphere_constant(2) * std::sqrt(2.0) / 3.0;
  const double by_quadrature = oracle::gauss_legendre(
      [](double s) { return weight_F({s / std::sqrt(2.0), s / std::sqrt(2.0)}, 2); }, 0.0,
      std::sqrt(2.0), 4);
  EXPECT_LT(rel(by_quadrature, exact), 1e-14);
  const ProfileCurve fine = cone_curve(unit, 4096);
  EXPECT_LT(rel(length_h(fine, 2), exact), 1e-6);
}

TEST(Curve, SpeedInBothCoordinatesAgreesOnRefinedGrids) {
  for (double s : {0.0, 0.1, 0.7}) {
    const ProfileCurve curve = sigma_s_curve(s, 4096);
    for (std::size_t i = 0; i + 1 < curve.elements(); i += 97)
      EXPECT_LT(rel(speed_g_uv(curve, i), speed_g(curve, i)), 1e-6) << "s=" << s << " i=" << i;
  }
  const ProfileCurve cyl = cylinder_curve(BoundaryOrbit(3, 2.0, 1.0), 2048);
  for (std::size_t i = 0; i + 1 < cyl.elements(); i += 31)
    EXPECT_LT(rel(speed_g_uv(cyl, i), speed_g(cyl, i)), 1e-6);
}

TEST(Curve, LengthHMatchesWeightedArcLength) {
  // Reference: quadrature of F(sigma_s(t)) |sigma_s'(t)| in t, from the (u, v) formulas.
  const int n = 3;
  const double s = 0.3;
  auto integrand = [&](double t) {
    const double v = 1.0 - t;
    const double r = std::hypot(s * t, v);
    return sphere_constant(n) * v * v * std::sqrt(1.0 + s * s) / std::sqrt(2.0 * r);
  };
  const double reference = oracle::gauss_legendre(integrand, 0.0, 1.0, 64);
  const double coarse = length_h(sigma_s_curve(s, 1024), n);
  const double fine = length_h(sigma_s_curve(s, 4096), n);
  EXPECT_LT(rel(fine, reference), rel(coarse, reference));
  EXPECT_LT(rel(fine, reference), 1e-6);
}

TEST(Curve, ConeWeightPerNode) {
  const int n = 4;
  const double radius = 1.7;
  const ProfileCurve cone = cone_curve(BoundaryOrbit(n, radius, radius), 50);
  for (std::size_t i = 0; i < cone.size(); ++i) {
    const double expected = sphere_constant(n) * std::pow((1.0 - cone.node(i)) * radius, 2 * n - 2);
    EXPECT_NEAR(weight_F(cone.point(i), n), expected, 1e-12 * sphere_constant(n) * std::pow(radius, 6));
  }
}

TEST(Curve, ReflectionPreservesWeightsAndSpeeds) {
  const ProfileCurve curve = cylinder_curve(BoundaryOrbit(2, 2.0, 1.0), 40);
  const ProfileCurve mirror = curve.reflected();
  for (std::size_t i = 0; i < curve.elements(); ++i) {
    EXPECT_EQ(speed_g(curve, i), speed_g(mirror, i));
    EXPECT_EQ(speed_h(curve, i, 3), speed_h(mirror, i, 3));
    EXPECT_EQ(weight_F(curve.point(i), 3), weight_F(mirror.point(i), 3));
  }
}

TEST(Curve, SamplesOfCanonicalCurves) {
  const ProfileCurve s0 = sigma_s_curve(0.0, 4);
  EXPECT_NEAR(s0.point(3).x, 0.5, 1e-15);
  EXPECT_NEAR(s0.point(3).y, 0.5, 1e-15);
  const ProfileCurve s1 = sigma_s_curve(1.0, 4);
  EXPECT_NEAR(s1.end().x, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s1.end().y, 0.0);
  const ProfileCurve cyl = cylinder_curve(BoundaryOrbit(2, 1.0, 1.0), 4);
  EXPECT_EQ(cyl.point(2).x, 1.0);
  EXPECT_EQ(cyl.point(2).y, 0.5);
  EXPECT_THROW(cone_curve(BoundaryOrbit(2, 2.0, 1.0), 8), PreconditionError);

  const ProfileCurve a = sigma_s_curve(0.0, 300);
  const ProfileCurve b = sigma0_curve(300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.point(i).x, b.point(i).x, 1e-12);
    EXPECT_NEAR(a.point(i).y, b.point(i).y, 1e-12);
  }
}

TEST(Curve, SubdivisionKeepsTheImage) {
  const ProfileCurve base = sigma_s_curve(0.4, 10);
  const ProfileCurve fine = base.subdivided(4);
  EXPECT_EQ(fine.elements(), 40u);
  EXPECT_NEAR(length_g(fine), length_g(base), 1e-14);
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(fine.point(4 * i).x, base.point(i).x);
    EXPECT_EQ(fine.node(4 * i), base.node(i));
  }
}

TEST(CurveCsv, RoundTripIsExact) {
  const ProfileCurve curve = sigma_s_curve(0.37, 33);
  std::stringstream buffer;
  write_curve_csv(buffer, curve);
  const ProfileCurve back = read_curve_csv(buffer);
  ASSERT_EQ(back.size(), curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_EQ(back.node(i), curve.node(i));
    EXPECT_EQ(back.point(i).x, curve.point(i).x);
    EXPECT_EQ(back.point(i).y, curve.point(i).y);
  }
}

TEST(CurveCsv, RejectsBadInput) {
  std::istringstream no_header("0,1,1\n1,1,0\n");
  EXPECT_THROW(read_curve_csv(no_header), PreconditionError);
  std::istringstream garbage("t,x,y\n0,1,abc\n1,1,0\n");
  EXPECT_THROW(read_curve_csv(garbage), PreconditionError);
  std::istringstream off_boundary("t,x,y\n0,1,1\n1,1,0.2\n");
  EXPECT_THROW(read_curve_csv(off_boundary), PreconditionError);
}
