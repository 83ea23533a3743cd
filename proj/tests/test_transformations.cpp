#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conelab/errors.hpp"
#include "conelab/transformations.hpp"

using namespace conelab;

namespace {

ProfileCurve uv_curve(std::vector<UVPoint> samples) {
  return curve_from_uv(uniform_nodes(samples.size() - 1), samples);
}

ProfileCurve polar_uv_curve(std::vector<std::pair<double, double>> r_theta) {
  std::vector<UVPoint> samples;
  for (auto [r, theta] : r_theta) samples.push_back({r * std::cos(theta), r * std::sin(theta), r});
  samples.back().v = 0.0;
  return uv_curve(samples);
}

void expect_same_curve(const ProfileCurve& a, const ProfileCurve& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.node(i), b.node(i), tol) << "node " << i;
    EXPECT_NEAR(a.point(i).x, b.point(i).x, tol) << "node " << i;
    EXPECT_NEAR(a.point(i).y, b.point(i).y, tol) << "node " << i;
  }
}

RefinementOptions quick_refinement() {
  RefinementOptions options;
  options.levels = 3;
  return options;
}

}  // namespace

TEST(ReparamH, ConstantHSpeedAndSameVertices) {
  const ProfileCurve curve = random_curve(3, 0);
  const ProfileCurve out = reparam_h(curve, 3);
  const double speed = speed_h(out, 0, 3);
  for (std::size_t i = 0; i < out.elements(); ++i)
    EXPECT_NEAR(speed_h(out, i, 3), speed, 1e-10 * speed);
  EXPECT_NEAR(speed, length_h(curve, 3), 1e-10 * speed);
  ASSERT_EQ(out.size(), curve.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.point(i).x, curve.point(i).x);
    EXPECT_EQ(out.point(i).y, curve.point(i).y);
  }
}

TEST(ReparamH, Idempotent) {
  const ProfileCurve once = reparam_h(random_curve(3, 1), 2);
  expect_same_curve(reparam_h(once, 2), once, 1e-12);
}

TEST(ReparamH, ConeNodesFollowTheClosedFormArclength) {
  // On the cone F ~ (1 - tau)^2 at g-parameter tau, so the normalized h-arclength is
  // 1 - (1 - tau)^3; midpoint sampling is second-order accurate.
  const std::size_t elements = 200;
  const ProfileCurve out = reparam_h(cone_curve(BoundaryOrbit(2, 1.0, 1.0), elements), 2);
  for (std::size_t i = 0; i <= elements; ++i) {
    const double tau = static_cast<double>(i) / elements;
    EXPECT_NEAR(out.node(i), 1.0 - std::pow(1.0 - tau, 3), 2.0 / (elements * elements));
  }
  // Parameter steps shrink toward the end, where F is small.
  for (std::size_t i = 1; i < out.elements(); ++i)
    EXPECT_LT(out.node(i + 1) - out.node(i), out.node(i) - out.node(i - 1));
}

TEST(ReparamH, EigenvalueUnchanged) {
  const ProfileCurve curve = random_curve(3, 2);
  const auto before = refine_and_extrapolate(curve, 3.0, 2, quick_refinement());
  const auto after = refine_and_extrapolate(reparam_h(curve, 2), 3.0, 2, quick_refinement());
  EXPECT_NEAR(after.lambda, before.lambda, 1e-10 * before.lambda);
}

TEST(ReparamG, ConstantGSpeedAndIdempotent) {
  const ProfileCurve out = reparam_g(random_curve(3, 4));
  const double speed = speed_g(out, 0);
  for (std::size_t i = 0; i < out.elements(); ++i) EXPECT_NEAR(speed_g(out, i), speed, 1e-10 * speed);
  expect_same_curve(reparam_g(out), out, 1e-12);
  const ProfileCurve cone = cone_curve(BoundaryOrbit(3, 2.0, 2.0), 50);
  expect_same_curve(reparam_g(cone), cone, 1e-12);
}

TEST(ReparamG, DropsConstantPieces) {
  // (1,1) -> (1,0.5) -> (1,0.5) -> (1,0): the repeated vertex disappears.
  const ProfileCurve curve(uniform_nodes(3), {{1.0, 1.0}, {1.0, 0.5}, {1.0, 0.5}, {1.0, 0.0}});
  const ProfileCurve out = reparam_g(curve);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(out.node(1), 0.5);
}

TEST(ReparamG, EigenvalueUnchangedAtPTwo) {
  const ProfileCurve curve = random_curve(3, 5);
  const auto before = refine_and_extrapolate(curve, 2.0, 3, quick_refinement());
  const auto after = refine_and_extrapolate(reparam_g(curve), 2.0, 3, quick_refinement());
  EXPECT_NEAR(after.lambda, before.lambda, 1e-9 * before.lambda);
}

TEST(Reparam, RejectsBadDimension) { EXPECT_THROW(reparam_h(random_curve(1, 0), 1), PreconditionError); }

TEST(InvertToBall, FixedCircleAndInversion) {
  const double rho0 = std::sqrt(2.0);
  const double angle = 0.3;
  const ProfileCurve curve(uniform_nodes(3), {{1.0, 1.0},
                                              {rho0 * std::cos(angle), rho0 * std::sin(angle)},
                                              {2 * rho0 * std::cos(angle), 2 * rho0 * std::sin(angle)},
                                              {0.5, 0.0}});
  const ProfileCurve out = invert_to_ball(curve);
  // The sample on the fixed circle is only within rounding of it.
  EXPECT_NEAR(out.point(1).x, curve.point(1).x, 1e-15);
  EXPECT_NEAR(out.point(1).y, curve.point(1).y, 1e-15);
  EXPECT_NEAR(std::hypot(out.point(2).x, out.point(2).y), rho0 / 2, 1e-15);
  EXPECT_NEAR(std::atan2(out.point(2).y, out.point(2).x), angle, 1e-15);
  EXPECT_EQ(out.point(3).x, 0.5);
}

TEST(InvertToBall, InsideBallAndAnglesKept) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ProfileCurve curve = random_curve(11, i);
    const ProfileCurve out = invert_to_ball(curve);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const Point a = curve.point(k);
      const Point b = out.point(k);
      EXPECT_LE(b.x * b.x + b.y * b.y, 2.0 * (1.0 + 1e-15));
      if (a.x * a.x + a.y * a.y <= 2.0) {
        EXPECT_EQ(a.x, b.x);
        EXPECT_EQ(a.y, b.y);
      }
      EXPECT_NEAR(std::atan2(b.y, b.x), std::atan2(a.y, a.x), 1e-15);
    }
    expect_same_curve(invert_to_ball(out), out, 0.0);
  }
}

TEST(UMonotonize, RunningSupOfSamples) {
  {
    const ProfileCurve out = u_monotonize(uv_curve({{0.5, 1.0}, {0.3, 0.5}, {0.6, 0.0}}));
    EXPECT_NEAR(to_uv(out.point(1)).u, 0.5, 1e-15);
    EXPECT_NEAR(to_uv(out.point(2)).u, 0.6, 1e-15);
  }
  {
    const ProfileCurve out = u_monotonize(uv_curve({{0.0, 1.0}, {-0.2, 0.5}, {0.1, 0.0}}));
    EXPECT_NEAR(to_uv(out.point(0)).u, 0.0, 1e-15);
    EXPECT_NEAR(to_uv(out.point(1)).u, 0.2, 1e-15);
    EXPECT_NEAR(to_uv(out.point(2)).u, 0.2, 1e-15);
    EXPECT_NEAR(to_uv(out.point(1)).v, 0.5, 1e-15);
  }
}

TEST(UMonotonize, KeepsVAndIsIdempotent) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ProfileCurve curve = random_curve(12, i);
    const ProfileCurve out = u_monotonize(curve);
    EXPECT_TRUE(is_u_monotone(out));
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double v = to_uv(curve.point(k)).v;
      EXPECT_NEAR(to_uv(out.point(k)).v, v, 1e-15 * std::max(v, 1.0));
    }
    expect_same_curve(u_monotonize(out), out, 1e-12);
  }
}

TEST(UMonotonize, RejectsNegativeStart) {
  EXPECT_THROW(u_monotonize(uv_curve({{-0.1, 1.0}, {0.2, 0.0}})), PreconditionError);
}

TEST(RuMonotonize, RunningMinWithAngleClamp) {
  const ProfileCurve curve = polar_uv_curve({{1.0, 1.2}, {1.2, 1.1}, {0.9, 0.0}});
  ASSERT_TRUE(is_u_monotone(curve));
  const ProfileCurve out = ru_monotonize(curve);
  const UVPoint a = to_uv(out.point(1));
  EXPECT_NEAR(a.r, 1.0, 1e-15);
  EXPECT_NEAR(std::atan2(a.v, a.u), 1.1, 1e-14);
  EXPECT_EQ(out.point(0).x, curve.point(0).x);
  EXPECT_EQ(out.point(2).x, curve.point(2).x);
  EXPECT_NEAR(to_uv(out.point(2)).r, 0.9, 1e-15);
}

TEST(RuMonotonize, AngleClampUsesTheLastAgreement) {
  // Off the coincidence set the angle stays above its value 1.0 at the last agreement.
  const ProfileCurve curve = polar_uv_curve({{1.0, 1.0}, {1.1, 1.05}, {1.2, 1.02}, {0.95, 0.0}});
  ASSERT_TRUE(is_u_monotone(curve));
  const ProfileCurve out = ru_monotonize(curve);
  for (std::size_t k : {1u, 2u}) {
    const UVPoint a = to_uv(out.point(k));
    EXPECT_NEAR(a.r, 1.0, 1e-15);
    EXPECT_NEAR(std::atan2(a.v, a.u), 1.0, 1e-14);
  }
}

TEST(RuMonotonize, MonotoneOutputAndIdempotent) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ProfileCurve curve = u_monotonize(random_curve(13, i));
    const ProfileCurve out = ru_monotonize(curve);
    EXPECT_TRUE(is_r_monotone(out));
    EXPECT_TRUE(is_u_monotone(out));
    // Unchanged on the coincidence set.
    double r_min = to_uv(curve.start()).r;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const double r = to_uv(curve.point(k)).r;
      if (r <= r_min) {
        EXPECT_EQ(out.point(k).x, curve.point(k).x);
        EXPECT_EQ(out.point(k).y, curve.point(k).y);
        r_min = r;
      }
    }
    expect_same_curve(ru_monotonize(out), out, 1e-12);
  }
  // The cylinder has r = (1 + y^2) / 2, already decreasing.
  const ProfileCurve cylinder = cylinder_curve(BoundaryOrbit(2, 1.0, 1.0), 20);
  ASSERT_TRUE(is_r_monotone(cylinder));
  expect_same_curve(ru_monotonize(cylinder), cylinder, 0.0);
}

TEST(RuMonotonize, RequiresUMonotoneInput) {
  EXPECT_THROW(ru_monotonize(uv_curve({{0.5, 1.0}, {0.3, 0.5}, {0.6, 0.0}})), PreconditionError);
}

TEST(Transversality, SigmaS) {
  EXPECT_NEAR(transversality_constant(sigma_s_curve(0.4, 32)), 1.0, 1e-12);
  EXPECT_NEAR(transversality_constant(sigma0_curve(32)), 1.0, 1e-12);
  // The cylinder (1, 1 - t) has v = 1 - t as well.
  EXPECT_NEAR(transversality_constant(cylinder_curve(BoundaryOrbit(2, 1.0, 1.0), 8)), 1.0, 1e-12);
}

TEST(Canonicalize, ConeIsAFixedPoint) {
  const ProfileCurve cone = cone_curve(BoundaryOrbit(2, 1.0, 1.0), 64);
  const TransformReport report = canonicalize(cone, 3.0, 2, quick_refinement());
  expect_same_curve(report.output, cone, 1e-12);
  EXPECT_NEAR(report.lambda_after, report.lambda_before, 1e-12 * report.lambda_before);
  ASSERT_EQ(report.stages.size(), 5u);
  EXPECT_EQ(report.stages[0].name, "invert_to_ball");
  EXPECT_EQ(report.stages[3].name, "reparam_g");
}

TEST(Canonicalize, WigglyCurveIsImproved) {
  const ProfileCurve curve = random_curve(21, 3);
  const TransformReport report = canonicalize(curve, 3.0, 2, quick_refinement());
  EXPECT_TRUE(report.non_decreasing());
  const ProfileCurve& out = report.output;
  const double speed = speed_g(out, 0);
  for (std::size_t i = 0; i < out.elements(); ++i) EXPECT_NEAR(speed_g(out, i), speed, 1e-10 * speed);
  EXPECT_TRUE(is_u_monotone(out));
  EXPECT_TRUE(is_r_monotone(out));
  EXPECT_GT(to_uv(out.end()).u, 0.0);
  EXPECT_GT(report.transversality, 0.0);
  for (const Point& q : out.points()) EXPECT_LE(q.x * q.x + q.y * q.y, 2.0 * (1.0 + 1e-15));
}

TEST(Canonicalize, RequiresLargeExponent) {
  EXPECT_THROW(canonicalize(random_curve(1, 0), 4.0, 3), PreconditionError);
  EXPECT_THROW(apply_transform("u_monotonize", random_curve(1, 0), 2.0, 2), PreconditionError);
  EXPECT_NO_THROW(apply_transform("reparam_g", random_curve(1, 0), 2.0, 3, quick_refinement()));
  EXPECT_THROW(apply_transform("spin", random_curve(1, 0), 3.0, 2), PreconditionError);
}

TEST(RandomCurve, SeededAndValid) {
  const ProfileCurve a = random_curve(5, 7);
  const ProfileCurve b = random_curve(5, 7);
  expect_same_curve(a, b, 0.0);
  const ProfileCurve c = random_curve(5, 8);
  EXPECT_NE(a.point(10).x, c.point(10).x);
  EXPECT_EQ(a.start().x, 1.0);
  EXPECT_EQ(a.start().y, 1.0);
  EXPECT_EQ(a.end().y, 0.0);
  EXPECT_GT(a.end().x, 0.0);
  // The generator has to exercise the operators.
  int escapes = 0;
  int u_dips = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const ProfileCurve curve = random_curve(5, i);
    bool outside = false;
    for (const Point& q : curve.points()) outside = outside || q.x * q.x + q.y * q.y > 2.0;
    escapes += outside;
    u_dips += !is_u_monotone(curve);
  }
  EXPECT_GE(escapes, 5);
  EXPECT_GE(u_dips, 5);
}

// Small version of the monotonicity suite; the acceptance run covers 100 curves per case.
class MonotonicitySuite : public ::testing::TestWithParam<std::tuple<int, double, const char*>> {};

TEST_P(MonotonicitySuite, EigenvalueDoesNotDecrease) {
  const auto [n, p, name] = GetParam();
  for (std::uint64_t i = 0; i < 6; ++i) {
    const TransformReport report = apply_transform(name, random_curve(99, i), p, n, quick_refinement());
    EXPECT_TRUE(report.non_decreasing())
        << name << " curve " << i << ": " << report.lambda_before << " -> " << report.lambda_after;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Operators, MonotonicitySuite,
    ::testing::Combine(::testing::Values(2), ::testing::Values(3.0),
                       ::testing::Values("reparam_h", "invert_to_ball", "u_monotonize",
                                         "ru_monotonize", "canonicalize")));

TEST(LengthBound, ProductOfLengthAndEigenvalue) {
  const ProfileCurve curve = random_curve(2, 2);
  EXPECT_DOUBLE_EQ(length_bound_product(curve, 2, 3.0), 3.0 * length_h(curve, 2));
}
