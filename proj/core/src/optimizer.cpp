#include "conelab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conelab/errors.hpp"
#include "conelab/nelder_mead.hpp"
#include "conelab/parallel.hpp"
#include "conelab/perturbation.hpp"

namespace conelab {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double clamp01(double z) { return std::clamp(z, 0.0, 1.0); }

// Point of `curve` at parameter tau, linear between nodes.
Point point_at(const ProfileCurve& curve, double tau) {
  const auto nodes = curve.nodes();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), tau);
  if (it == nodes.end()) return curve.end();
  const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double w = (tau - nodes[i]) / (nodes[i + 1] - nodes[i]);
  const Point a = curve.point(i);
  const Point b = curve.point(i + 1);
  return {a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)};
}

}  // namespace

CandidateParametrization::CandidateParametrization(const BoundaryOrbit& orbit, std::size_t knots,
                                                   std::size_t nodes, bool monotone)
    : orbit_(orbit), knots_(knots), nodes_(nodes), monotone_(monotone) {
  if (knots < 3) throw PreconditionError("parametrization needs at least 3 knots");
  if (nodes < knots) throw PreconditionError("parametrization needs at least as many nodes as knots");
  const UVPoint start = to_uv(orbit.point());
  u0_ = start.u;
  r0_ = start.r;
}

std::vector<CandidateParametrization::Knot> CandidateParametrization::knots_of(const std::vector<double>& z) const {
  if (z.size() != dimension()) throw PreconditionError("parameter vector has the wrong length");
  const double span = r0_ - u0_;
  const double end = u0_ + clamp01(z.back()) * span;
  std::vector<Knot> knots(knots_);
  knots.front() = {u0_, r0_};
  for (std::size_t i = 1; i + 1 < knots_; ++i) {
    double u = u0_ + clamp01(z[2 * (i - 1)]) * span;
    double r = u0_ + clamp01(z[2 * (i - 1) + 1]) * span;
    if (monotone_) {
      u = std::max(u, knots[i - 1].u);
      r = std::min(r, knots[i - 1].r);
    }
    knots[i] = {std::min(u, end), std::max(r, end)};
  }
  knots.back() = {end, end};
  return knots;
}

ProfileCurve CandidateParametrization::decode(const std::vector<double>& z) const {
  const std::vector<Knot> knots = knots_of(z);
  std::vector<Point> points{orbit_.point()};
  const double last = static_cast<double>(knots_ - 1);
  for (std::size_t i = 1; i < nodes_; ++i) {
    const double s = last * static_cast<double>(i) / static_cast<double>(nodes_);
    const std::size_t k = std::min(static_cast<std::size_t>(s), knots_ - 2);
    const double w = s - static_cast<double>(k);
    const double u = knots[k].u + w * (knots[k + 1].u - knots[k].u);
    const double r = knots[k].r + w * (knots[k + 1].r - knots[k].r);
    // x^2 = r + u and y^2 = r - u.
    const Point q{std::sqrt(r + u), std::sqrt(std::max(0.0, r - u))};
    if (q.x > 0.0 && q.y > 0.0) points.push_back(q);
  }
  points.push_back({std::sqrt(2.0 * knots.back().u), 0.0});
  std::vector<double> nodes = uniform_nodes(points.size() - 1);
  return {std::move(nodes), std::move(points)};
}

std::vector<double> CandidateParametrization::encode(const ProfileCurve& curve) const {
  const double span = r0_ - u0_;
  std::vector<double> z(dimension());
  for (std::size_t i = 1; i + 1 < knots_; ++i) {
    const UVPoint uv = to_uv(point_at(curve, static_cast<double>(i) / static_cast<double>(knots_ - 1)));
    z[2 * (i - 1)] = (uv.u - u0_) / span;
    z[2 * (i - 1) + 1] = (uv.r - u0_) / span;
  }
  const Point end = curve.end();
  z.back() = (0.5 * (end.x * end.x - end.y * end.y) - u0_) / span;
  for (double& value : z) value = clamp01(value);
  return z;
}

namespace {

struct Start {
  std::string name;
  std::vector<double> z;
};

// A line in (u, v) from the start down to v = 0, shifted by s v0 in u; the sigma_s
// family for symmetric orbits.
ProfileCurve tilted_line(const BoundaryOrbit& orbit, double s, std::size_t elements) {
  const UVPoint start = to_uv(orbit.point());
  std::vector<double> nodes = uniform_nodes(elements);
  std::vector<Point> points;
  for (double t : nodes) points.push_back(from_uv(start.u + s * start.v * t, start.v * (1.0 - t)));
  points.front() = orbit.point();
  return {std::move(nodes), std::move(points)};
}

std::vector<Start> base_starts(const BoundaryOrbit& orbit, const CandidateParametrization& space) {
  std::vector<Start> starts;
  if (orbit.symmetric()) starts.push_back({"cone", space.encode(cone_curve(orbit, 64))});
  starts.push_back({"cylinder", space.encode(cylinder_curve(orbit, 64))});
  for (double s : {0.2, 0.4}) starts.push_back({"sigma_" + std::to_string(s).substr(0, 3), space.encode(tilted_line(orbit, s, 64))});
  if (orbit.symmetric())
    starts.push_back({"roundoff_0.2_0.02", space.encode(roundoff_curve(0.2, 0.02, 64).scaled(orbit.x0()))});
  return starts;
}

struct Evaluator {
  const CandidateParametrization& space;
  double p;
  int n;

  // Single-grid eigenvalue; failures count as infeasible.
  double lambda(const std::vector<double>& z) const {
    try {
      const ProfileCurve curve = space.decode(z);
      const WeightedRayleighProblem problem = assemble(curve, p, n);
      if (p == 2.0) return solve_p2(problem).lambda;
      GeneralPOptions options;
      options.restarts = 1;
      return solve_general_p(problem, std::nullopt, options).lambda;
    } catch (const std::exception&) {
      return -kInfinity;
    }
  }
};

}  // namespace

OptimizerResult maximize(const BoundaryOrbit& orbit, double p, const OptimizerConfig& config) {
  if (!(p >= 2.0)) throw PreconditionError("optimizer requires p >= 2");
  if (config.restarts < 1) throw PreconditionError("optimizer needs at least one restart");
  const int n = orbit.n();
  const CandidateParametrization space(orbit, config.knots, config.nodes, config.monotone);
  const Evaluator evaluator{space, p, n};

  std::vector<Start> starts;
  if (config.initial) {
    if (config.initial->size() != space.dimension())
      throw PreconditionError("initial parameters have the wrong length");
    starts.push_back({"initial", *config.initial});
  } else {
    starts = base_starts(orbit, space);
  }
  const std::size_t base_count = starts.size();

  const std::size_t restarts = static_cast<std::size_t>(config.restarts);
  std::vector<RestartResult> results(restarts);
  std::vector<std::vector<TraceEntry>> traces(restarts);
  parallel_for(restarts, [&](std::size_t k) {
    Start start = starts[k % base_count];
    if (k >= base_count) {
      std::seed_seq seq{config.seed, static_cast<std::uint64_t>(k)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> noise(0.0, 0.05);
      for (double& value : start.z) value = clamp01(value + noise(rng));
      start.name += "+noise";
    }
    RestartResult& out = results[k];
    out.restart = static_cast<int>(k);
    out.start = start.name;
    out.start_lambda = evaluator.lambda(start.z);
    NelderMeadOptions options;
    options.max_evaluations = config.max_evaluations;
    options.initial_step = config.initial_step;
    double last_best = kInfinity;
    auto on_step = [&](const NelderMeadStep& step) {
      if (!(step.best < last_best)) return;
      last_best = step.best;
      traces[k].push_back({out.restart, step.iteration, -step.best, 0.0, space.knots_of(step.point)});
    };
    const NelderMeadResult nm = nelder_mead([&](const std::vector<double>& z) { return -evaluator.lambda(z); },
                                            start.z, options, on_step);
    out.lambda = -nm.value;
    out.evaluations = nm.evaluations;
    out.parameters = nm.point;
    out.feasible = std::isfinite(out.lambda);
    out.length_g = out.feasible ? length_g(space.decode(nm.point)) : kInfinity;
  });

  int best = -1;
  for (const RestartResult& r : results) {
    if (!r.feasible) continue;
    if (best < 0) {
      best = r.restart;
      continue;
    }
    const RestartResult& b = results[static_cast<std::size_t>(best)];
    const double tie = 1e-10 * std::abs(b.lambda);
    if (r.lambda > b.lambda + tie || (std::abs(r.lambda - b.lambda) <= tie && r.length_g < b.length_g))
      best = r.restart;
  }
  if (best < 0) throw ConvergenceError("optimizer: no restart found a feasible candidate", "");

  const RestartResult& winner = results[static_cast<std::size_t>(best)];
  ProfileCurve curve = space.decode(winner.parameters);
  EigenSolution solution = refine_and_extrapolate(curve, p, n, config.final_refinement);
  if (orbit.reflected()) curve = curve.reflected();

  OptimizerResult result{std::move(curve), std::move(solution), winner.parameters, best, std::move(results), {}, {}};
  double running = -kInfinity;
  for (auto& trace : traces)
    for (TraceEntry& entry : trace) {
      running = std::max(running, entry.lambda);
      entry.best_so_far = running;
      result.trace.push_back(std::move(entry));
    }
  if (p < 2.0 * n - 1.0)
    result.warnings.push_back("p < 2n - 1: the monotone class is not known to contain a maximizer");
  return result;
}

std::vector<BaselineRow> compare_baselines(const BoundaryOrbit& orbit, double p, const OptimizerResult* optimized,
                                           const RefinementOptions& refinement) {
  const int n = orbit.n();
  std::vector<BaselineRow> rows;
  auto add = [&](std::string name, const CurveFamily& family) {
    const EigenSolution sol = refine_and_extrapolate(family, p, n, refinement);
    rows.push_back({std::move(name), sol.lambda, sol.error_bar});
  };
  if (orbit.symmetric()) add("cone", [&](std::size_t m) { return cone_curve(orbit, m); });
  add("cylinder", [&](std::size_t m) { return cylinder_curve(orbit, m); });
  for (double s : {0.1, 0.2, 0.4})
    add("sigma_" + std::to_string(s).substr(0, 3), [&](std::size_t m) { return tilted_line(orbit, s, m); });
  if (orbit.symmetric())
    add("roundoff_0.2_0.02", [&](std::size_t m) { return roundoff_curve(0.2, 0.02, m).scaled(orbit.x0()); });
  if (optimized) rows.push_back({"optimizer", optimized->solution.lambda, optimized->solution.error_bar});
  return rows;
}

}  // namespace conelab
