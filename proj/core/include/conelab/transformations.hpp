#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conelab/eigensolver.hpp"
#include "conelab/orbit_geometry.hpp"

namespace conelab {

/// Reparametrization by h-arclength: the vertices are kept and node i moves to the
/// normalized h-length F(mid) |chord| accumulated up to vertex i, so the h-speed is the
/// same on every element. Elements of zero h-length are removed. Throws
/// PreconditionError on zero total h-length.
ProfileCurve reparam_h(const ProfileCurve& curve, int n);

/// Same with the plain chord length, i.e. constant g-speed.
ProfileCurve reparam_g(const ProfileCurve& curve);

/// Node-wise inversion r -> min(r, rho0^2 / r) in (x, y)-polar coordinates, where
/// rho0 is the distance of the starting point from the origin. Angles are kept.
ProfileCurve invert_to_ball(const ProfileCurve& curve);

/// Replaces u by the running maximum of |u| over the nodes; v is kept.
/// Requires u >= 0 at the start.
ProfileCurve u_monotonize(const ProfileCurve& curve);

/// Replaces the (u, v)-radius by its running minimum. On each run of nodes where the
/// minimum is strictly below r, the polar angle is the running minimum of the angle
/// since the last node of agreement. Requires a u-monotone input.
ProfileCurve ru_monotonize(const ProfileCurve& curve);

bool is_u_monotone(const ProfileCurve& curve);
bool is_r_monotone(const ProfileCurve& curve);

/// Largest c with v(t) >= c (1 - t) at every node t < 1.
double transversality_constant(const ProfileCurve& curve);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct TransformReport {
  std::string transform;
  double p = 2.0;
  int n = 2;
  ProfileCurve input;
  ProfileCurve output;
  double lambda_before = 0.0;
  double lambda_after = 0.0;
  double error_before = 0.0;
  double error_after = 0.0;
  double transversality = 0.0;
  std::vector<StageTiming> stages;

  /// lambda_after >= lambda_before - max(error bars, relative * lambda_before).
  bool non_decreasing(double relative = 1e-4) const;
};

/// invert_to_ball, u_monotonize, ru_monotonize and reparam_g in that order, with
/// eigenvalues of input and output from the same refinement schedule. Requires p >= 2n-1.
TransformReport canonicalize(const ProfileCurve& curve, double p, int n,
                             const RefinementOptions& refinement = {});

/// Runs one named operator ("reparam_h", "reparam_g", "invert_to_ball", "u_monotonize",
/// "ru_monotonize", "canonicalize") and reports the eigenvalues. ru_monotonize is applied
/// after u_monotonize and compared against that intermediate curve.
TransformReport apply_transform(const std::string& name, const ProfileCurve& curve, double p, int n,
                                const RefinementOptions& refinement = {});

struct RandomCurveOptions {
  std::size_t elements = 64;
  int modes = 4;
  double radial_amplitude = 0.5;   // log-radius perturbation
  double angular_amplitude = 1.5;  // logit-angle perturbation
  double s_min = 0.1;
  double s_max = 1.0;
};

/// Seeded random perturbation of sigma_s from (1, 1): the (x, y)-radius is multiplied by
/// exp(sum a_k sin(k pi t)) and the logit of 2 theta / pi is shifted by sum b_k sin(k pi t),
/// with a_k, b_k uniform and decaying like 1/k. `index` selects an independent stream.
ProfileCurve random_curve(std::uint64_t seed, std::uint64_t index,
                          const RandomCurveOptions& options = {});

/// L_h(curve) * lambda, the quantity bounded by a p-dependent constant.
double length_bound_product(const ProfileCurve& curve, int n, double lambda);

}  // namespace conelab
