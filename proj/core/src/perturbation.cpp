#include "conelab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "conelab/bessel.hpp"
#include "conelab/errors.hpp"
#include "conelab/parallel.hpp"
#include "quadrature.hpp"

namespace conelab {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_weight_args(int n, double s, double t) {
  if (n < 2) throw PreconditionError("perturbation weights require n >= 2");
  if (!(s >= 0.0)) throw PreconditionError("perturbation weights require s >= 0");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("perturbation weights require 0 <= t <= 1");
}

void require_cone_dimension(int n) {
  if (n < 2 || n > 7) throw PreconditionError("conemin0 requires 2 <= n <= 7");
}

// phi and phi' of the cone eigenfunction in tau = sqrt(1 - t), without forming 1 - t.
struct TauEigenfunction {
  double alpha;
  double j;
  explicit TauEigenfunction(int n) : alpha(n - 1.5), j(first_root(n - 1.5)) {}
  double value(double tau) const { return std::pow(j, alpha) * bessel_j_scaled(alpha, j * tau); }
  double slope(double tau) const {
    return 0.5 * std::pow(j, alpha + 2.0) * bessel_j_scaled(alpha + 1.0, j * tau);
  }
};

}  // namespace

std::vector<double> graded_nodes(std::size_t elements) {
  auto t = uniform_nodes(elements);
  for (double& x : t) x = 1.0 - (1.0 - x) * (1.0 - x);
  t.back() = 1.0;
  return t;
}

WeightPair weights_PQ(int n, double s, double t) {
  require_weight_args(n, s, t);
  if (t == 1.0) return {0.0, 0.0};
  const double c = 1.0 - t;
  const double A = c * c + s * s * t * t;
  const double B = 1.0 + s * s;
  const double base = std::pow(c, n - 1);
  return {2.0 * base * std::pow(A, 0.25) / std::sqrt(B), base * std::sqrt(B) / std::pow(A, 0.25)};
}

WeightPair weights_PQ_dot(int n, double s, double t) {
  require_weight_args(n, s, t);
  if (t == 1.0 || s == 0.0) return {0.0, 0.0};
  const double c = 1.0 - t;
  const double A = c * c + s * s * t * t;
  const double B = 1.0 + s * s;
  const double base = std::pow(c, n - 1) * s;
  const double dP = base * (t * t * std::pow(A, -0.75) / std::sqrt(B) - 2.0 * std::pow(A, 0.25) / std::pow(B, 1.5));
  const double dQ = base * (std::pow(A, -0.25) / std::sqrt(B) - 0.5 * t * t * std::sqrt(B) * std::pow(A, -1.25));
  return {dP, dQ};
}

WeightPair weights_PQ_ddot0(int n, double t) {
  require_weight_args(n, 0.0, t);
  const double c = 1.0 - t;
  return {t * t * std::pow(c, n - 2.5) - 2.0 * std::pow(c, n - 0.5),
          std::pow(c, n - 1.5) - 0.5 * t * t * std::pow(c, n - 3.5)};
}

WeightedRayleighProblem sigma_s_problem(int n, double s, std::size_t elements) {
  if (n < 2) throw PreconditionError("sigma_s problem requires n >= 2");
  if (!(s >= 0.0)) throw PreconditionError("sigma_s problem requires s >= 0");
  if (elements < 2) throw PreconditionError("sigma_s problem requires N >= 2");
  auto t = graded_nodes(elements);
  std::vector<double> a(elements), b(elements);
  for (std::size_t i = 0; i < elements; ++i) {
    const WeightPair w = weights_PQ(n, s, 0.5 * (t[i] + t[i + 1]));
    a[i] = w.P;
    b[i] = w.Q;
  }
  auto problem = weighted_problem(2.0, std::move(t), std::move(a), std::move(b));
  problem.n = n;
  return problem;
}

RefinementOptions perturbation_refinement() {
  RefinementOptions options;
  options.levels = 4;
  options.base_elements = 128;
  return options;
}

EigenSolution lambda_sigma_s(int n, double s, const RefinementOptions& refinement) {
  EigenSolution sol = refine_and_extrapolate(
      ProblemFamily([=](std::size_t m) { return sigma_s_problem(n, s, m); }), 2.0, refinement);
  sol.n = n;
  const double slope = sol.phi[1] / (sol.t[1] - sol.t[0]);
  for (double& value : sol.phi) value /= slope;
  return sol;
}

namespace {

// Exact s-derivative of the discrete eigenvalue: the weights enter the discrete
// quotient only through their midpoint values.
DiniBound dini_on_grid(int n, double s, const EigenSolution& sol) {
  DiniBound out;
  out.s = s;
  double stiffness = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < sol.t.size(); ++i) {
    const double dt = sol.t[i + 1] - sol.t[i];
    const double mid = 0.5 * (sol.t[i] + sol.t[i + 1]);
    const double slope = (sol.phi[i + 1] - sol.phi[i]) / dt;
    const double value = 0.5 * (sol.phi[i] + sol.phi[i + 1]);
    const WeightPair w = weights_PQ(n, s, mid);
    const WeightPair dw = weights_PQ_dot(n, s, mid);
    stiffness += dw.P * slope * slope * dt;
    mass += dw.Q * value * value * dt;
    out.denominator += w.Q * value * value * dt;
  }
  out.numerator = stiffness - sol.lambda * mass;
  out.bound = out.numerator / out.denominator;
  return out;
}

}  // namespace

DiniBound dini_lower_bound(int n, double s, const RefinementOptions& refinement) {
  if (!(s > 0.0 && s <= 0.5)) throw PreconditionError("Dini bound requires 0 < s <= 0.5");
  if (refinement.levels < 2) throw PreconditionError("Dini bound needs at least two levels");
  std::vector<double> bounds;
  DiniBound finest;
  for (int k = 0; k < refinement.levels; ++k) {
    const EigenSolution sol = solve_p2(sigma_s_problem(n, s, refinement.base_elements << k));
    finest = dini_on_grid(n, s, sol);
    bounds.push_back(finest.bound);
  }
  const Extrapolation ex = extrapolate_levels(bounds, 2.0);
  finest.bound = ex.value;
  finest.error_bar = ex.error_bar;
  finest.scaled = ex.value / s;
  return finest;
}

double conemin0_truncated(int n, double epsilon) {
  if (n < 2) throw PreconditionError("conemin0 requires n >= 2");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw PreconditionError("truncation must lie in [0, 1)");
  if (n == 2 && epsilon == 0.0) return kInfinity;
  const TauEigenfunction phi(n);
  const double lambda = 0.5 * phi.j * phi.j;
  // dt = 2 tau dtau absorbed into the powers; 1 - t = tau^2 exactly.
  auto integrand = [&](double tau) {
    const double t = 1.0 - tau * tau;
    const double d = phi.slope(tau);
    const double v = phi.value(tau);
    const double p_part = 2.0 * t * t * std::pow(tau, 2 * n - 4) - 4.0 * std::pow(tau, 2 * n);
    const double q_part = 2.0 * std::pow(tau, 2 * n - 2) - t * t * std::pow(tau, 2 * n - 6);
    return d * d * p_part - lambda * v * v * q_part;
  };
  return detail::integrate(integrand, std::sqrt(epsilon), 1.0, "conemin0");
}

double conemin0_integral(int n) {
  require_cone_dimension(n);
  return conemin0_truncated(n, 0.0);
}

double cone_mass_integral(int n) {
  if (n < 2) throw PreconditionError("cone mass requires n >= 2");
  const TauEigenfunction phi(n);
  auto integrand = [&](double tau) {
    const double v = phi.value(tau);
    return 2.0 * v * v * std::pow(tau, 2 * n - 2);
  };
  return detail::integrate(integrand, 0.0, 1.0, "cone mass");
}

double roundoff_tangency(double s, double delta) {
  if (!(delta > 0.0 && delta < s)) throw PreconditionError("roundoff requires 0 < delta < s");
  return 1.0 - s * delta / (1.0 + s * s);
}

ProfileCurve roundoff_curve(double s, double delta, std::size_t elements) {
  const double t0 = roundoff_tangency(s, delta);
  if (elements < 2) throw PreconditionError("roundoff requires N >= 2");
  if (!(t0 > 0.0 && t0 < 1.0)) throw ConvergenceError("roundoff: no tangency point", "t0 = " + std::to_string(t0));
  std::vector<double> nodes = uniform_nodes(elements);
  const auto at = std::lower_bound(nodes.begin(), nodes.end(), t0);
  const double spacing = 1.0 / static_cast<double>(elements);
  if (std::abs(*at - t0) < 1e-9 * spacing)
    *at = t0;
  else if (at != nodes.begin() && std::abs(*(at - 1) - t0) < 1e-9 * spacing)
    *(at - 1) = t0;
  else
    nodes.insert(at, t0);
  const double center = s - delta;
  const double radius = delta / std::sqrt(1.0 + s * s);
  std::vector<Point> points;
  points.reserve(nodes.size());
  for (double t : nodes) {
    const double v = 1.0 - t;
    if (t <= t0) {
      points.push_back(from_uv(s * t, v));
    } else {
      points.push_back(from_uv(center + std::sqrt(std::max(0.0, radius * radius - v * v)), v));
    }
  }
  points.back() = from_uv(center + radius, 0.0);
  return {std::move(nodes), std::move(points)};
}

PerturbationReport perturbation_scan(int n, std::vector<double> s_grid, const RefinementOptions& refinement) {
  if (n < 2) throw PreconditionError("perturbation scan requires n >= 2");
  for (double s : s_grid)
    if (!(s >= 0.0)) throw PreconditionError("perturbation scan: s must be nonnegative");
  s_grid.push_back(0.0);
  std::sort(s_grid.begin(), s_grid.end());
  s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());

  PerturbationReport report;
  report.n = n;
  report.s_grid = s_grid;
  const std::size_t count = s_grid.size();
  report.lambdas.assign(count, 0.0);
  report.error_bars.assign(count, 0.0);
  report.dini_bounds.assign(count, std::numeric_limits<double>::quiet_NaN());
  parallel_for(count, [&](std::size_t k) {
    const double s = s_grid[k];
    const EigenSolution sol = lambda_sigma_s(n, s, refinement);
    if (s > 0.0 && s <= 0.5) report.dini_bounds[k] = dini_lower_bound(n, s, refinement).bound;
    report.lambdas[k] = sol.lambda;
    report.error_bars[k] = sol.error_bar;
  });
  report.margins.resize(count);
  for (std::size_t k = 0; k < count; ++k) report.margins[k] = report.lambdas[k] - report.lambdas[0];
  report.conemin0_value = n <= 7 ? conemin0_integral(n) : std::numeric_limits<double>::quiet_NaN();
  const double j = first_root(n - 1.5);
  report.cone_lambda = 0.5 * j * j;
  return report;
}

void write_perturbation_csv(std::ostream& out, const PerturbationReport& report) {
  out << "s,lambda,error_bar,dini_bound,margin\n";
  char buffer[64];
  auto put = [&](double x) {
    if (std::isnan(x)) {
      out << "nan";
      return;
    }
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    out << buffer;
  };
  for (std::size_t k = 0; k < report.s_grid.size(); ++k) {
    put(report.s_grid[k]);
    out << ',';
    put(report.lambdas[k]);
    out << ',';
    put(report.error_bars[k]);
    out << ',';
    put(report.dini_bounds[k]);
    out << ',';
    put(report.margins[k]);
    out << '\n';
  }
}

}  // namespace conelab
