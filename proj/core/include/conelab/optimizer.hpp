#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conelab/eigensolver.hpp"
#include "conelab/orbit_geometry.hpp"

namespace conelab {

/// Search space over profile curves from a fixed orbit with x0 >= y0.
///
/// A candidate is k knots (u_i, r_i) in (u, v)-polar form, linear in between, sampled at
/// N + 1 uniform nodes with v = sqrt(r^2 - u^2). The free parameters are normalized to
/// [0, 1] along [u0, r0]: 2(k - 2) interior values and the end value E = u(1) = r(1).
/// Decoding clamps u to a running maximum and r to a running minimum (the monotone class),
/// then u <= E <= r. Interior nodes with v = 0 coincide with the end and are dropped.
class CandidateParametrization {
 public:
  CandidateParametrization(const BoundaryOrbit& orbit, std::size_t knots = 12, std::size_t nodes = 512,
                           bool monotone = true);

  std::size_t knots() const noexcept { return knots_; }
  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t dimension() const noexcept { return 2 * (knots_ - 2) + 1; }
  bool monotone() const noexcept { return monotone_; }

  struct Knot {
    double u = 0.0;
    double r = 0.0;
  };

  /// Feasible knots for a parameter vector.
  std::vector<Knot> knots_of(const std::vector<double>& z) const;
  ProfileCurve decode(const std::vector<double>& z) const;
  /// Parameters whose knots sample `curve` at k equally spaced parameter values.
  std::vector<double> encode(const ProfileCurve& curve) const;

 private:
  BoundaryOrbit orbit_;
  std::size_t knots_;
  std::size_t nodes_;
  bool monotone_;
  double u0_;
  double r0_;
};

struct OptimizerConfig {
  std::size_t knots = 12;
  std::size_t nodes = 512;
  int restarts = 8;
  std::size_t max_evaluations = 600;
  double initial_step = 0.1;
  std::uint64_t seed = 1;
  bool monotone = true;
  /// Start every restart here instead of the default starts (warm restart test).
  std::optional<std::vector<double>> initial;
  RefinementOptions final_refinement{3, 512, {}};
};

struct TraceEntry {
  int restart = 0;
  std::size_t iteration = 0;
  double lambda = 0.0;        // best vertex of that restart's simplex
  double best_so_far = 0.0;   // over the merged trace up to this line
  std::vector<CandidateParametrization::Knot> knots;
};

struct RestartResult {
  int restart = 0;
  std::string start;  // name of the start curve
  double start_lambda = 0.0;
  double lambda = 0.0;  // single-grid value at the configured N
  double length_g = 0.0;
  std::size_t evaluations = 0;
  bool feasible = true;
  std::vector<double> parameters;
};

struct OptimizerResult {
  ProfileCurve curve;  // in the caller's orientation
  EigenSolution solution;
  std::vector<double> parameters;
  int best_restart = 0;
  std::vector<RestartResult> restarts;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
};

/// Nelder-Mead over CandidateParametrization from the cone (symmetric orbits), the
/// cylinder, monotone projections of sigma_s and round-offs, and seeded perturbations
/// of them. Restarts run in parallel. The best restart (ties within 1e-10 relative go
/// to the smaller L_g) is re-solved with final_refinement. BoundaryOrbit stores x0 >= y0;
/// for a reflected orbit the returned curve is reflected back. p < 2n - 1 adds a warning.
/// Throws ConvergenceError when no restart finds a feasible candidate.
OptimizerResult maximize(const BoundaryOrbit& orbit, double p, const OptimizerConfig& config = {});

struct BaselineRow {
  std::string name;
  double lambda = 0.0;
  double error_bar = 0.0;
};

/// Cone (symmetric orbits only), cylinder, sigma_s for s in {0.1, 0.2, 0.4} and the
/// round-off s = 0.2, delta = 0.02 (symmetric orbits only, scaled to the orbit), and the
/// optimizer result when given.
std::vector<BaselineRow> compare_baselines(const BoundaryOrbit& orbit, double p,
                                           const OptimizerResult* optimized = nullptr,
                                           const RefinementOptions& refinement = {3, 256, {}});

}  // namespace conelab
