#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "conelab/eigensolver.hpp"
#include "conelab/orbit_geometry.hpp"

namespace conelab {

struct WeightPair {
  double P = 0.0;
  double Q = 0.0;
};

/// Weights of the sigma_s quotient at p = 2,
///   P_s = 2 (1-t)^(n-1) A^(1/4) / (1+s^2)^(1/2),  Q_s = (1-t)^(n-1) (1+s^2)^(1/2) / A^(1/4),
/// with A = (1-t)^2 + s^2 t^2. At t = 1 the limits (0, 0) are returned.
WeightPair weights_PQ(int n, double s, double t);
/// Their s-derivatives; both carry a factor s.
WeightPair weights_PQ_dot(int n, double s, double t);
/// lim s^-1 (dP/ds, dQ/ds) as s -> 0:
///   t^2 (1-t)^(n-5/2) - 2 (1-t)^(n-1/2)  and  (1-t)^(n-3/2) - t^2 (1-t)^(n-7/2) / 2.
/// Singular at t = 1 for small n; the returned value is then the infinite limit.
WeightPair weights_PQ_ddot0(int n, double t);

/// Nodes 1 - (1 - i/N)^2, refined toward t = 1 where Q_0 has a square-root singularity.
std::vector<double> graded_nodes(std::size_t elements);

/// Quotient with the analytic (P_s, Q_s) weights on graded_nodes(elements).
WeightedRayleighProblem sigma_s_problem(int n, double s, std::size_t elements);

/// Default schedule for the sigma_s problems: 4 levels from 128 elements.
RefinementOptions perturbation_refinement();

/// lambda_{1,2}(sigma_s) from the analytic weights. The eigenfunction on the finest
/// grid is scaled to unit slope at t = 0 (first difference quotient).
EigenSolution lambda_sigma_s(int n, double s, const RefinementOptions& refinement = perturbation_refinement());

struct DiniBound {
  double s = 0.0;
  double numerator = 0.0;    // int |phi'|^2 dP - lambda |phi|^2 dQ
  double denominator = 0.0;  // int |phi|^2 Q
  double bound = 0.0;        // numerator / denominator, extrapolated over the levels
  double error_bar = 0.0;
  double scaled = 0.0;       // bound / s, tends to conemin0 / int phi^2 Q_0
};

/// Lower bound for the lower left Dini derivative of s -> lambda(sigma_s). On each grid
/// the quotient is evaluated with that grid's eigenpair, then the levels are
/// extrapolated; numerator and denominator are those of the finest grid.
/// Requires 0 < s <= 0.5.
DiniBound dini_lower_bound(int n, double s, const RefinementOptions& refinement = perturbation_refinement());

/// int_0^1 |phi'|^2 P0'' - lambda |phi|^2 Q0'' dt for the cone eigenfunction
/// phi(t) = (1-t)^(-a/2) J_a(j sqrt(1-t)), computed in tau = sqrt(1-t).
/// 2 <= n <= 7. For n = 2 the integral is +infinity.
double conemin0_integral(int n);
/// The same integral over [0, 1 - epsilon]; epsilon > 0 is allowed for every n.
double conemin0_truncated(int n, double epsilon);
/// int_0^1 phi^2 Q_0 dt with the same phi.
double cone_mass_integral(int n);

/// sigma_s up to the point t0 where it touches the disc of radius delta / sqrt(1+s^2)
/// about (s - delta, 0) in the (u, v)-plane, then the outer arc of that disc at the
/// same v = 1 - t down to v = 0. Nodes are uniform plus t0. Requires 0 < delta < s.
ProfileCurve roundoff_curve(double s, double delta, std::size_t elements);
/// Parameter of the tangency point, 1 - s delta / (1 + s^2).
double roundoff_tangency(double s, double delta);

struct PerturbationReport {
  int n = 2;
  std::vector<double> s_grid;
  std::vector<double> lambdas;
  std::vector<double> error_bars;
  std::vector<double> dini_bounds;  // NaN at s = 0
  std::vector<double> margins;      // lambda(sigma_s) - lambda(sigma_0)
  double conemin0_value = 0.0;
  double cone_lambda = 0.0;
};

/// Scan over the grid (s = 0 is added when missing, values above 0.5 get no Dini bound).
/// Runs the s values in parallel.
PerturbationReport perturbation_scan(int n, std::vector<double> s_grid,
                                     const RefinementOptions& refinement = perturbation_refinement());

/// Columns s, lambda, error_bar, dini_bound, margin.
void write_perturbation_csv(std::ostream& out, const PerturbationReport& report);

}  // namespace conelab
