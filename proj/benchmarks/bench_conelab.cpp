#include <benchmark/benchmark.h>

#include "conelab/bessel.hpp"
#include "conelab/cone_analysis.hpp"
#include "conelab/eigensolver.hpp"
#include "conelab/optimizer.hpp"
#include "conelab/perturbation.hpp"
#include "conelab/transformations.hpp"

using namespace conelab;

namespace {

void BM_BesselJ(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0)) + 0.5;
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j(nu, x));
    x = x > 40.0 ? 0.1 : x + 0.37;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(3)->Arg(20);

void BM_FirstRoot(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(first_root(3.5));
}
BENCHMARK(BM_FirstRoot);

void BM_SolveP2(benchmark::State& state) {
  const auto problem = assemble(cone_curve(BoundaryOrbit(3, 1.0, 1.0), state.range(0)), 2.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_p2(problem).lambda);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveP2)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

// p = 3 is the cost driver of the optimizer and the monotonicity suite.
void BM_SolveGeneralP(benchmark::State& state) {
  const double p = static_cast<double>(state.range(1));
  const auto problem = assemble(random_curve(1, 0, {static_cast<std::size_t>(state.range(0))}), p, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_general_p(problem).lambda);
}
BENCHMARK(BM_SolveGeneralP)->Args({128, 3})->Args({512, 3})->Args({512, 8})->Args({512, 32})->Unit(benchmark::kMillisecond);

void BM_RefineCone(benchmark::State& state) {
  const BoundaryOrbit orbit(2, 1.0, 1.0);
  const CurveFamily family = [&](std::size_t m) { return cone_curve(orbit, m); };
  for (auto _ : state) benchmark::DoNotOptimize(refine_and_extrapolate(family, 2.0, 2).lambda);
}
BENCHMARK(BM_RefineCone)->Unit(benchmark::kMillisecond);

void BM_Canonicalize(benchmark::State& state) {
  const ProfileCurve curve = random_curve(4, 2);
  RefinementOptions refinement;
  refinement.levels = 3;
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(curve, 3.0, 2, refinement).lambda_after);
}
BENCHMARK(BM_Canonicalize)->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify(n).lower_sum);
}
BENCHMARK(BM_Certify)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_LambdaSigmaS(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lambda_sigma_s(4, 0.1).lambda);
}
BENCHMARK(BM_LambdaSigmaS)->Unit(benchmark::kMillisecond);

void BM_OptimizerEvaluations(benchmark::State& state) {
  OptimizerConfig config;
  config.restarts = 1;
  config.max_evaluations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize(BoundaryOrbit(2, 1.0, 1.0), 2.0, config).solution.lambda);
}
BENCHMARK(BM_OptimizerEvaluations)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
