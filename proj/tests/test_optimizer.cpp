#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelab/cone_analysis.hpp"
#include "conelab/errors.hpp"
#include "conelab/nelder_mead.hpp"
#include "conelab/optimizer.hpp"
#include "conelab/transformations.hpp"
#include "conelab_reproduce/oracles.hpp"

using namespace conelab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_parameters(const CandidateParametrization& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> z(space.dimension());
  for (double& v : z) v = unit(rng);
  return z;
}

double single_grid_lambda(const ProfileCurve& curve, int n) { return solve_p2(assemble(curve, 2.0, n)).lambda; }

// One optimizer run shared by several tests.
const OptimizerResult& symmetric_run() {
  static const OptimizerResult result = maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0);
  return result;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions options;
  options.max_evaluations = 5000;
  options.tolerance = 1e-16;
  options.initial_step = 0.5;
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, options);
  EXPECT_NEAR(r.point[0], 1.0, 1e-4);
  EXPECT_NEAR(r.point[1], 1.0, 1e-4);
}

TEST(NelderMead, BestValueNeverIncreases) {
  auto f = [](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.3) * (x[i] - 0.3);
    return s;
  };
  double last = std::numeric_limits<double>::infinity();
  bool monotone = true;
  const NelderMeadResult r = nelder_mead(f, std::vector<double>(5, 0.0), {}, [&](const NelderMeadStep& step) {
    if (step.best > last) monotone = false;
    last = step.best;
  });
  EXPECT_TRUE(monotone);
  EXPECT_LT(r.value, 1e-8);
  EXPECT_LE(r.evaluations, NelderMeadOptions{}.max_evaluations + 6);
}

TEST(NelderMead, InfeasiblePointsAreRejected) {
  auto f = [](const std::vector<double>& x) {
    return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 1.0) * (x[0] - 1.0);
  };
  const NelderMeadResult r = nelder_mead(f, {0.1});
  EXPECT_NEAR(r.point[0], 1.0, 1e-4);
}

TEST(Parametrization, ConeIsRepresentedExactly) {
  const BoundaryOrbit orbit(2, 1.0, 1.0);
  const CandidateParametrization space(orbit, 12, 512);
  const ProfileCurve curve = space.decode(space.encode(cone_curve(orbit, 64)));
  for (const Point& q : curve.points()) EXPECT_NEAR(q.x, q.y, 1e-14);
  EXPECT_EQ(curve.end().x, 0.0);
  EXPECT_NEAR(single_grid_lambda(curve, 2), kPi * kPi / 2, 1e-4);
}

TEST(Parametrization, CylinderIsRepresentedExactly) {
  const BoundaryOrbit orbit(3, 1.5, 1.0);
  const CandidateParametrization space(orbit, 12, 256);
  const ProfileCurve curve = space.decode(space.encode(cylinder_curve(orbit, 64)));
  for (const Point& q : curve.points()) EXPECT_NEAR(q.x, 1.5, 1e-13);
  EXPECT_EQ(curve.end().y, 0.0);
}

TEST(Parametrization, DecodedCurvesAreMonotoneAndValid) {
  for (const BoundaryOrbit& orbit : {BoundaryOrbit(2, 1.0, 1.0), BoundaryOrbit(3, 2.0, 1.0)}) {
    const CandidateParametrization space(orbit, 12, 256);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::vector<double> z = random_parameters(space, seed);
      z.back() = 0.05 + 0.9 * z.back();
      const ProfileCurve curve = space.decode(z);
      EXPECT_TRUE(curve.starts_at(orbit));
      EXPECT_TRUE(is_u_monotone(curve)) << seed;
      EXPECT_TRUE(is_r_monotone(curve)) << seed;
      EXPECT_GT(curve.end().x, 0.0);
      EXPECT_EQ(curve.end().y, 0.0);
      const auto knots = space.knots_of(z);
      for (std::size_t i = 1; i < knots.size(); ++i) {
        EXPECT_GE(knots[i].u, knots[i - 1].u);
        EXPECT_LE(knots[i].r, knots[i - 1].r);
        EXPECT_LE(knots[i].u, knots[i].r);
      }
    }
  }
}

TEST(Parametrization, WideningDropsMonotonicity) {
  const BoundaryOrbit orbit(2, 1.0, 1.0);
  const CandidateParametrization wide(orbit, 12, 256, false);
  int non_monotone = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    if (!is_u_monotone(wide.decode(random_parameters(wide, seed)))) ++non_monotone;
  EXPECT_GT(non_monotone, 0);
}

TEST(Parametrization, DecodedCurvesAreAlreadyCanonical) {
  const BoundaryOrbit orbit(2, 1.0, 1.0);
  const CandidateParametrization space(orbit, 8, 48);
  RefinementOptions refinement;
  refinement.levels = 3;
  for (std::uint64_t seed : {3u, 7u}) {
    const TransformReport report = canonicalize(space.decode(random_parameters(space, seed)), 3.0, 2, refinement);
    const double tol = std::max(report.error_before, report.error_after) + 1e-9 * report.lambda_before;
    EXPECT_LE(std::abs(report.lambda_after - report.lambda_before), tol) << seed;
  }
}

TEST(Parametrization, RejectsBadInput) {
  const BoundaryOrbit orbit(2, 1.0, 1.0);
  EXPECT_THROW(CandidateParametrization(orbit, 2, 64), PreconditionError);
  EXPECT_THROW(CandidateParametrization(orbit, 12, 8), PreconditionError);
  const CandidateParametrization space(orbit);
  EXPECT_THROW(space.decode({0.5}), PreconditionError);
}

TEST(Maximize, BeatsConeBeyondErrorBars) {
  const OptimizerResult& r = symmetric_run();
  const double cone = cone_lambda_p2(2);
  EXPECT_GT(r.solution.lambda - r.solution.error_bar, cone);
  EXPECT_TRUE(r.curve.starts_at(BoundaryOrbit(2, 1.0, 1.0)));
  EXPECT_EQ(r.warnings.size(), 1u);  // p = 2 < 2n - 1
  EXPECT_EQ(r.restarts.size(), 8u);
}

TEST(Maximize, AtLeastEveryBaseline) {
  const OptimizerResult& r = symmetric_run();
  const auto rows = compare_baselines(BoundaryOrbit(2, 1.0, 1.0), 2.0, &r);
  ASSERT_EQ(rows.back().name, "optimizer");
  for (const BaselineRow& row : rows)
    EXPECT_GE(r.solution.lambda, row.lambda - row.error_bar - r.solution.error_bar) << row.name;
}

TEST(Maximize, TraceIsMonotone) {
  const OptimizerResult& r = symmetric_run();
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].best_so_far, r.trace[i - 1].best_so_far);
    if (r.trace[i].restart == r.trace[i - 1].restart) EXPECT_GT(r.trace[i].lambda, r.trace[i - 1].lambda);
  }
  EXPECT_EQ(r.trace.front().knots.size(), 12u);
}

TEST(Maximize, Deterministic) {
  OptimizerConfig config;
  config.restarts = 3;
  config.max_evaluations = 200;
  const OptimizerResult a = maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0, config);
  const OptimizerResult b = maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0, config);
  EXPECT_EQ(a.solution.lambda, b.solution.lambda);
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_EQ(a.trace.size(), b.trace.size());
}

TEST(Maximize, ReflectionInvariant) {
  OptimizerConfig config;
  config.restarts = 3;
  config.max_evaluations = 200;
  const OptimizerResult a = maximize(BoundaryOrbit(2, 2.0, 1.0), 2.0, config);
  const OptimizerResult b = maximize(BoundaryOrbit(2, 1.0, 2.0), 2.0, config);
  EXPECT_EQ(a.solution.lambda, b.solution.lambda);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve.point(i).x, b.curve.point(i).y);
    EXPECT_EQ(a.curve.point(i).y, b.curve.point(i).x);
  }
  EXPECT_EQ(b.curve.start().x, 1.0);
  EXPECT_EQ(b.curve.end().x, 0.0);
}

TEST(Maximize, WarmRestartIsAFixedPoint) {
  // A budget large enough for the simplex to collapse; a budget-limited run keeps climbing.
  OptimizerConfig config;
  config.knots = 5;
  config.nodes = 128;
  config.restarts = 2;
  config.max_evaluations = 6000;
  const OptimizerResult first = maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0, config);
  ASSERT_LT(first.restarts[static_cast<std::size_t>(first.best_restart)].evaluations, config.max_evaluations);
  config.restarts = 1;
  config.initial = first.parameters;
  const OptimizerResult again = maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0, config);
  EXPECT_NEAR(again.solution.lambda, first.solution.lambda, 1e-6 * first.solution.lambda);
}

TEST(Maximize, AsymmetricOrbitBeatsCylinder) {
  OptimizerConfig config;
  config.restarts = 3;
  const BoundaryOrbit orbit(2, 2.0, 1.0);
  const OptimizerResult r = maximize(orbit, 2.0, config);
  const auto rows = compare_baselines(orbit, 2.0, &r);
  for (const BaselineRow& row : rows) {
    EXPECT_NE(row.name, "cone");
    EXPECT_GE(r.solution.lambda, row.lambda - row.error_bar - r.solution.error_bar) << row.name;
  }
}

TEST(Maximize, SmallExponentWarns) {
  OptimizerConfig config;
  config.restarts = 2;
  config.max_evaluations = 40;
  config.nodes = 64;
  const OptimizerResult r = maximize(BoundaryOrbit(3, 1.0, 1.0), 2.0, config);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_THROW(maximize(BoundaryOrbit(2, 1.0, 1.0), 1.5, config), PreconditionError);
}

TEST(Baselines, CylinderAndConeClosedForms) {
  const auto rows = compare_baselines(BoundaryOrbit(2, 1.0, 1.0), 2.0);
  const double j0 = oracle::bisect([](double x) { return std::cyl_bessel_j(0.0, x); }, 2.0, 3.0);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0].name, "cone");
  EXPECT_NEAR(rows[0].lambda, kPi * kPi / 2, 1e-8);
  EXPECT_EQ(rows[1].name, "cylinder");
  EXPECT_NEAR(rows[1].lambda, j0 * j0, 1e-7);
  EXPECT_NEAR(rows[1].lambda, 5.7832, 1e-4);
  EXPECT_GT(rows[1].lambda, rows[0].lambda);
}
