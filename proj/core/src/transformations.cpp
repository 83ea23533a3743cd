#include "conelab/transformations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "conelab/errors.hpp"

namespace conelab {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Element length for reparametrization: chord, optionally weighted by F at the chord midpoint.
struct ElementLength {
  int n = 0;  // 0 selects the g-length
  double operator()(Point a, Point b) const {
    const double chord = std::hypot(b.x - a.x, b.y - a.y);
    if (n == 0) return chord;
    return weight_F({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, n, WeightScale::Unit) * chord;
  }
};

// Keeps every vertex and relabels the nodes by normalized cumulative element length.
// Elements of zero length are dropped, which merges the nodes around them.
// Pieces below 1e-14 of the total count as zero, as in assembly.
ProfileCurve reparametrize(const ProfileCurve& curve, ElementLength length, const char* what) {
  std::vector<double> pieces(curve.elements());
  double total = 0.0;
  for (std::size_t i = 0; i < curve.elements(); ++i) {
    pieces[i] = length(curve.point(i), curve.point(i + 1));
    total += pieces[i];
  }
  if (!(total > 0.0)) throw PreconditionError(std::string(what) + ": curve has zero length");
  std::vector<double> nodes{0.0};
  std::vector<Point> points{curve.start()};
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.elements(); ++i) {
    sum += pieces[i];
    const double t = sum / total;
    if (!(pieces[i] >= 1e-14 * total) || !(t > nodes.back())) continue;
    nodes.push_back(t);
    points.push_back(curve.point(i + 1));
  }
  if (nodes.size() < 2) throw PreconditionError(std::string(what) + ": curve has zero length");
  nodes.back() = 1.0;
  points.back() = curve.end();
  return {std::move(nodes), std::move(points)};
}

double polar_angle(double u, double v) { return std::atan2(v, u); }

}  // namespace

ProfileCurve reparam_h(const ProfileCurve& curve, int n) {
  if (n < 2) throw PreconditionError("reparam_h requires n >= 2");
  return reparametrize(curve, ElementLength{n}, "reparam_h");
}

ProfileCurve reparam_g(const ProfileCurve& curve) {
  return reparametrize(curve, ElementLength{0}, "reparam_g");
}

ProfileCurve invert_to_ball(const ProfileCurve& curve) {
  const Point start = curve.start();
  const double rho0_sq = start.x * start.x + start.y * start.y;
  std::vector<Point> points(curve.points().begin(), curve.points().end());
  for (Point& q : points) {
    const double rho_sq = q.x * q.x + q.y * q.y;
    if (rho_sq <= rho0_sq) continue;
    const double factor = rho0_sq / rho_sq;
    q = {q.x * factor, q.y * factor};
  }
  return {std::vector<double>(curve.nodes().begin(), curve.nodes().end()), std::move(points)};
}

ProfileCurve u_monotonize(const ProfileCurve& curve) {
  const double u_start = to_uv(curve.start()).u;
  if (u_start < 0.0) throw PreconditionError("u_monotonize requires u >= 0 at the start");
  std::vector<Point> points(curve.points().begin(), curve.points().end());
  double sup = 0.0;
  for (Point& q : points) {
    const UVPoint uv = to_uv(q);
    const double mag = std::abs(uv.u);
    if (mag >= sup && uv.u >= 0.0) {
      sup = mag;
      continue;
    }
    sup = std::max(sup, mag);
    q = from_uv(sup, uv.v);
  }
  return {std::vector<double>(curve.nodes().begin(), curve.nodes().end()), std::move(points)};
}

ProfileCurve ru_monotonize(const ProfileCurve& curve) {
  if (!is_u_monotone(curve)) throw PreconditionError("ru_monotonize requires a u-monotone curve");
  std::vector<Point> points(curve.points().begin(), curve.points().end());
  const UVPoint first = to_uv(points.front());
  double r_min = first.r;
  double theta_min = polar_angle(first.u, first.v);
  for (Point& q : points) {
    const UVPoint uv = to_uv(q);
    const double theta = polar_angle(uv.u, uv.v);
    if (uv.r <= r_min) {
      r_min = uv.r;
      theta_min = theta;
      continue;
    }
    // Off the coincidence set: radius frozen at the running minimum, angle clamped to its
    // running minimum since the last node of agreement.
    theta_min = std::min(theta_min, theta);
    q = from_uv(r_min * std::cos(theta_min), r_min * std::sin(theta_min));
  }
  return {std::vector<double>(curve.nodes().begin(), curve.nodes().end()), std::move(points)};
}

// Both checks allow for the rounding of a round trip through from_uv.
bool is_u_monotone(const ProfileCurve& curve) {
  const double slack = 1e-13 * to_uv(curve.start()).r;
  double previous = 0.0;
  for (const Point& q : curve.points()) {
    const double u = to_uv(q).u;
    if (u < previous - slack) return false;
    previous = std::max(previous, u);
  }
  return true;
}

bool is_r_monotone(const ProfileCurve& curve) {
  const double slack = 1e-13 * to_uv(curve.start()).r;
  double previous = to_uv(curve.start()).r;
  for (const Point& q : curve.points()) {
    const double r = to_uv(q).r;
    if (r > previous + slack) return false;
    previous = std::min(previous, r);
  }
  return true;
}

double transversality_constant(const ProfileCurve& curve) {
  double c = kInfinity;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    c = std::min(c, to_uv(curve.point(i)).v / (1.0 - curve.node(i)));
  return c;
}

bool TransformReport::non_decreasing(double relative) const {
  const double tol = std::max({error_before, error_after, relative * lambda_before});
  return lambda_after >= lambda_before - tol;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_transform_exponent(double p, int n, const char* what) {
  if (p < 2.0 * n - 1.0)
    throw PreconditionError(std::string(what) + " requires p >= 2n - 1");
}

void fill_eigenvalues(TransformReport& report, const ProfileCurve& before, const ProfileCurve& after,
                      const RefinementOptions& refinement) {
  const EigenSolution a = refine_and_extrapolate(before, report.p, report.n, refinement);
  const EigenSolution b = refine_and_extrapolate(after, report.p, report.n, refinement);
  report.lambda_before = a.lambda;
  report.error_before = a.error_bar;
  report.lambda_after = b.lambda;
  report.error_after = b.error_bar;
}

}  // namespace

TransformReport canonicalize(const ProfileCurve& curve, double p, int n,
                             const RefinementOptions& refinement) {
  require_transform_exponent(p, n, "canonicalize");
  TransformReport report{"canonicalize", p, n, curve, curve, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  auto stage = [&](const char* name, auto&& op) {
    const auto start = Clock::now();
    report.output = op(report.output);
    report.stages.push_back({name, seconds_since(start)});
  };
  stage("invert_to_ball", [](const ProfileCurve& c) { return invert_to_ball(c); });
  stage("u_monotonize", [](const ProfileCurve& c) { return u_monotonize(c); });
  stage("ru_monotonize", [](const ProfileCurve& c) { return ru_monotonize(c); });
  stage("reparam_g", [](const ProfileCurve& c) { return reparam_g(c); });
  report.transversality = transversality_constant(report.output);
  const auto start = Clock::now();
  fill_eigenvalues(report, report.input, report.output, refinement);
  report.stages.push_back({"eigenvalues", seconds_since(start)});
  return report;
}

TransformReport apply_transform(const std::string& name, const ProfileCurve& curve, double p, int n,
                                const RefinementOptions& refinement) {
  if (name == "canonicalize") return canonicalize(curve, p, n, refinement);
  if (name == "reparam_g") {
    if (p < 2.0) throw PreconditionError("reparam_g requires p >= 2");
  } else {
    require_transform_exponent(p, n, name.c_str());
  }
  TransformReport report{name, p, n, curve, curve, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  const auto start = Clock::now();
  if (name == "reparam_h")
    report.output = reparam_h(curve, n);
  else if (name == "reparam_g")
    report.output = reparam_g(curve);
  else if (name == "invert_to_ball")
    report.output = invert_to_ball(curve);
  else if (name == "u_monotonize")
    report.output = u_monotonize(curve);
  else if (name == "ru_monotonize") {
    report.input = u_monotonize(curve);
    report.output = ru_monotonize(report.input);
  } else
    throw PreconditionError("unknown transform '" + name + "'");
  report.stages.push_back({name, seconds_since(start)});
  report.transversality = transversality_constant(report.output);
  const auto eig = Clock::now();
  fill_eigenvalues(report, report.input, report.output, refinement);
  report.stages.push_back({"eigenvalues", seconds_since(eig)});
  return report;
}

ProfileCurve random_curve(std::uint64_t seed, std::uint64_t index, const RandomCurveOptions& options) {
  if (options.elements < 2) throw PreconditionError("random curve needs N >= 2");
  if (options.modes < 1) throw PreconditionError("random curve needs at least one mode");
  if (!(options.s_min > 0.0) || options.s_max < options.s_min)
    throw PreconditionError("random curve: invalid s range");
  std::seed_seq seq{seed, index};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double s = std::uniform_real_distribution<double>(options.s_min, options.s_max)(rng);
  std::vector<double> a(options.modes), b(options.modes);
  for (int k = 0; k < options.modes; ++k) {
    a[k] = options.radial_amplitude * unit(rng) / (k + 1);
    b[k] = options.angular_amplitude * unit(rng) / (k + 1);
  }
  const ProfileCurve base = sigma_s_curve(s, options.elements);
  std::vector<Point> points(base.points().begin(), base.points().end());
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double t = base.node(i);
    double radial = 0.0;
    double angular = 0.0;
    for (int k = 0; k < options.modes; ++k) {
      const double mode = std::sin((k + 1) * std::numbers::pi * t);
      radial += a[k] * mode;
      angular += b[k] * mode;
    }
    const Point q = points[i];
    const double rho = std::hypot(q.x, q.y) * std::exp(radial);
    const double fraction = std::atan2(q.y, q.x) / kHalfPi;
    const double logit = std::log(fraction / (1.0 - fraction)) + angular;
    const double theta = kHalfPi / (1.0 + std::exp(-logit));
    points[i] = {rho * std::cos(theta), rho * std::sin(theta)};
  }
  return {std::vector<double>(base.nodes().begin(), base.nodes().end()), std::move(points)};
}

double length_bound_product(const ProfileCurve& curve, int n, double lambda) {
  return length_h(curve, n) * lambda;
}

}  // namespace conelab
