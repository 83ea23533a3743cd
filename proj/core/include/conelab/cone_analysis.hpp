#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conelab/eigensolver.hpp"

namespace conelab {

/// j_{n-3/2,1}^2 / (2 R^2), the first p = 2 eigenvalue of the cone through (R, R).
double cone_lambda_p2(int n, double radius = 1.0);

struct ConeBallReport {
  int n = 2;
  double p = 2.0;
  EigenSolution cone;
  EigenSolution ball;  // radial problem of the unit ball in R^(2n-1)
  double ratio = 0.0;
  double expected = 0.0;            // 2^(-p/2)
  double relative_deviation = 0.0;  // |ratio / expected - 1|
  double ratio_error_bar = 0.0;     // propagated from both error bars
};

/// Default schedule: 3 levels from 128 elements.
RefinementOptions cone_ball_refinement();

/// lambda_p of the cone over lambda_p of the ball B^(2n-1), compared with 2^(-p/2).
ConeBallReport cone_ball_relation_check(int n, double p,
                                        const RefinementOptions& refinement = cone_ball_refinement());

struct IdentityReport {
  int n = 2;
  double t_side = 0.0;
  double bessel_side = 0.0;
  double relative_difference = 0.0;
  /// Both sides diverge (n = 2); then the values above are the integrals over
  /// t <= 1 - truncation and x >= j sqrt(truncation), which correspond under x = j sqrt(1-t).
  bool divergent = false;
  double truncation = 0.0;
};

/// Integral of t (J_{a+1}^2 + J_a^2)(g - 1) over [0, j], g = (j^2 - t^2)^2 / (2 t^4),
/// against conemin0_integral. 2 <= n <= 7.
IdentityReport exp_integral_identity_check(int n);

/// Bessel side of the identity on [lower, j].
double exp_bessel_side(int n, double lower = 0.0);

enum class CertifyMode {
  Assert,  // 2 <= n <= 5 only
  Report,  // any n >= 2
};

enum class CertificateStatus {
  Certified,     // first integral < 4 and lower sum > 4
  Failed,        // the first integral is not below 4
  Inconclusive,  // the refinement cap was reached with lower sum <= 4
};

std::string to_string(CertificateStatus status);

struct CertificateCrossChecks {
  double first_integral_quadrature = 0.0;  // f' integrated directly on [0, j]
  double integral_quadrature = 0.0;        // f' g on [0, j]; +inf for n = 2
  std::vector<std::size_t> level_points;
  std::vector<double> level_sums;
  bool monotone = true;
};

struct PartitionCertificate {
  int n = 2;
  double alpha = 0.5;
  double j = 0.0;
  std::vector<double> partition;
  double first_integral = 0.0;
  double lower_sum = 0.0;
  bool verdict = false;
  CertificateStatus status = CertificateStatus::Inconclusive;
  CertificateCrossChecks cross_checks;
};

/// g(t) = (j^2 - t^2)^2 / (2 t^4).
double certificate_weight(double j, double t);

/// sum (f(p_i) - f(p_{i-1})) g(p_i) over an increasing partition starting at 0.
double lower_sum(double alpha, double j, const std::vector<double>& partition);

/// Nested partition of level k: 0 and j 2^(-i/2^k) for i = 0..(6 + k) 2^k.
std::vector<double> certificate_partition(double j, int level);

/// Refines until the lower sum exceeds 4 or the next level would pass 2^14 points.
PartitionCertificate certify(int n, CertifyMode mode = CertifyMode::Report);

}  // namespace conelab
