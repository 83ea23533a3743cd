#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/orbit_geometry.hpp"

namespace conelab {

/// One-dimensional quotient  sum a_i |dw/dt|^p dt  /  sum b_i |w_mid|^p dt  over
/// piecewise-linear nodal functions with w(0) = 0.
///
/// `node_t` holds the parameter of every retained node; `dt` are the element widths
/// in the variable the weights refer to (usually the curve parameter, but a problem
/// may be posed in a graded variable with a and b already carrying the Jacobian).
struct WeightedRayleighProblem {
  double p = 2.0;
  int n = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> dt;
  std::vector<double> node_t;
  std::size_t contracted = 0;

  std::size_t elements() const noexcept { return a.size(); }
  std::size_t nodes() const noexcept { return a.size() + 1; }
};

/// Builds the quotient of a profile curve: a_i = F(mid)/speed^(p-1), b_i = F(mid) speed.
/// Elements whose chord is shorter than 1e-14 L_g are contracted. Throws
/// PreconditionError("curve has zero length") if nothing is left.
WeightedRayleighProblem assemble(const ProfileCurve& curve, double p, int n,
                                 WeightScale scale = WeightScale::SphereVolume);

/// Radial problem of the unit ball in R^d on a uniform grid: a = b = (1-t)^(d-1).
WeightedRayleighProblem radial_ball_problem(int dimension, double p, std::size_t elements);

/// Problem from arbitrary per-element weights on the given nodes (dt from the nodes).
WeightedRayleighProblem weighted_problem(double p, std::vector<double> node_t,
                                         std::vector<double> a, std::vector<double> b);

/// Discrete quotient of nodal values w (w[0] must be 0). +infinity when the
/// denominator vanishes, including w = 0.
double rayleigh_quotient(const WeightedRayleighProblem& problem, std::span<const double> w);

struct EigenSolution {
  double lambda = 0.0;
  double error_bar = 0.0;
  double p = 2.0;
  int n = 0;
  std::vector<double> phi;
  std::vector<double> t;
  double residual = 0.0;
  std::size_t nodes = 0;
  int iterations = 0;
  std::vector<std::size_t> grid_levels;
  std::vector<double> level_lambdas;
  double observed_order = 0.0;
  std::vector<std::string> warnings;
};

/// Relative Euler-Lagrange defect max|G(phi)| / max|stiffness part| of nodal values.
double euler_lagrange_residual(const WeightedRayleighProblem& problem, std::span<const double> w,
                               double lambda);

/// Smallest eigenvalue of the p = 2 stiffness/mass pencil: Sturm bisection, then
/// inverse iteration for the eigenvector. Dirichlet at the first node, free at the last.
EigenSolution solve_p2(const WeightedRayleighProblem& problem);

struct GeneralPOptions {
  int restarts = 3;
  std::uint64_t seed = 1;
  int max_iterations = 400;
  double tolerance = 1e-12;
  double agreement = 1e-6;
};

/// Raised when descent from different starts ends at quotients further apart than
/// `agreement`; `candidates` lists every final quotient.
class NonconvexArtifactError : public ConvergenceError {
 public:
  NonconvexArtifactError(std::vector<double> candidates, std::string diagnostics)
      : ConvergenceError("nonconvex discretization artifact", std::move(diagnostics)),
        candidates_(std::move(candidates)) {}
  const std::vector<double>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<double> candidates_;
};

/// Minimizes the discrete p-quotient by Newton-type descent with backtracking and
/// positivity projection, from `seed` (default: the p = 2 eigenvector) and from
/// randomly perturbed copies of it.
EigenSolution solve_general_p(const WeightedRayleighProblem& problem,
                              std::optional<std::span<const double>> seed = std::nullopt,
                              const GeneralPOptions& options = {});

/// solve_p2 when p == 2, solve_general_p otherwise.
EigenSolution solve(const WeightedRayleighProblem& problem, const GeneralPOptions& options = {});

struct RefinementOptions {
  int levels = 4;
  std::size_t base_elements = 64;
  GeneralPOptions general;
};

using ProblemFamily = std::function<WeightedRayleighProblem(std::size_t elements)>;
using CurveFamily = std::function<ProfileCurve(std::size_t elements)>;

/// Solves on grids with base_elements * 2^k elements, k < levels, and Richardson
/// extrapolates the last levels (order 2 for p = 2, estimated otherwise). The result
/// carries the finest-grid eigenfunction and the extrapolated lambda.
EigenSolution refine_and_extrapolate(const ProblemFamily& family, double p,
                                     const RefinementOptions& options = {});
EigenSolution refine_and_extrapolate(const CurveFamily& family, double p, int n,
                                     const RefinementOptions& options = {});
/// Levels obtained by subdividing every element of `curve` 2^k times.
EigenSolution refine_and_extrapolate(const ProfileCurve& curve, double p, int n,
                                     const RefinementOptions& options = {});

/// Extrapolation of a level sequence; exposed for reuse by callers with their own grids.
struct Extrapolation {
  double value = 0.0;
  double error_bar = 0.0;
  double order = 0.0;
  bool monotone = true;
};
Extrapolation extrapolate_levels(std::span<const double> lambdas, std::optional<double> order);

}  // namespace conelab
