#include "conelab/cone_analysis.hpp"

#include <cmath>
#include <limits>

#include "conelab/bessel.hpp"
#include "conelab/errors.hpp"
#include "conelab/orbit_geometry.hpp"
#include "conelab/perturbation.hpp"
#include "quadrature.hpp"

namespace conelab {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxPartitionPoints = std::size_t{1} << 14;
constexpr double kIdentityTruncation = 1e-6;

}  // namespace

double cone_lambda_p2(int n, double radius) {
  if (n < 2) throw PreconditionError("cone eigenvalue requires n >= 2");
  if (!(radius > 0.0)) throw PreconditionError("cone eigenvalue requires R > 0");
  const double j = first_root(n - 1.5);
  return 0.5 * j * j / (radius * radius);
}

RefinementOptions cone_ball_refinement() {
  RefinementOptions options;
  options.levels = 3;
  options.base_elements = 128;
  return options;
}

ConeBallReport cone_ball_relation_check(int n, double p, const RefinementOptions& refinement) {
  if (n < 2) throw PreconditionError("cone/ball check requires n >= 2");
  if (!(p >= 2.0)) throw PreconditionError("cone/ball check requires p >= 2");
  ConeBallReport report;
  report.n = n;
  report.p = p;
  const BoundaryOrbit orbit(n, 1.0, 1.0);
  report.cone = refine_and_extrapolate(
      CurveFamily([&](std::size_t m) { return cone_curve(orbit, m); }), p, n, refinement);
  const int dimension = 2 * n - 1;
  report.ball = refine_and_extrapolate(
      ProblemFamily([=](std::size_t m) { return radial_ball_problem(dimension, p, m); }), p, refinement);
  report.ratio = report.cone.lambda / report.ball.lambda;
  report.expected = std::pow(2.0, -0.5 * p);
  report.relative_deviation = std::abs(report.ratio / report.expected - 1.0);
  report.ratio_error_bar =
      report.ratio * (report.cone.error_bar / report.cone.lambda + report.ball.error_bar / report.ball.lambda);
  return report;
}

double exp_bessel_side(int n, double lower) {
  if (n < 2) throw PreconditionError("identity check requires n >= 2");
  const double alpha = n - 1.5;
  const double j = first_root(alpha);
  if (!(lower >= 0.0 && lower < j)) throw PreconditionError("lower limit must lie in [0, j)");
  if (n == 2 && lower == 0.0) return kInfinity;
  auto integrand = [&](double x) {
    const double a = bessel_j(alpha + 1.0, x);
    const double b = bessel_j(alpha, x);
    return x * (a * a + b * b) * (certificate_weight(j, x) - 1.0);
  };
  return detail::integrate(integrand, lower, j, "identity (Bessel side)");
}

IdentityReport exp_integral_identity_check(int n) {
  if (n < 2 || n > 7) throw PreconditionError("identity check requires 2 <= n <= 7");
  IdentityReport report;
  report.n = n;
  if (n == 2) {
    // Both integrands behave like a constant over (1-t)^(3/2) near t = 1; compare the
    // integrals over corresponding pieces.
    report.divergent = true;
    report.truncation = kIdentityTruncation;
    report.t_side = conemin0_truncated(n, kIdentityTruncation);
    report.bessel_side = exp_bessel_side(n, first_root(n - 1.5) * std::sqrt(kIdentityTruncation));
  } else {
    report.t_side = conemin0_integral(n);
    report.bessel_side = exp_bessel_side(n);
  }
  report.relative_difference =
      std::abs(report.t_side - report.bessel_side) / std::max(std::abs(report.bessel_side), 1e-300);
  return report;
}

std::string to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Certified:
      return "certified";
    case CertificateStatus::Failed:
      return "failed";
    case CertificateStatus::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double certificate_weight(double j, double t) {
  const double d = j * j - t * t;
  const double t2 = t * t;
  return d * d / (2.0 * t2 * t2);
}

double lower_sum(double alpha, double j, const std::vector<double>& partition) {
  if (partition.size() < 2 || partition.front() != 0.0)
    throw PreconditionError("partition must start at 0 and have two points");
  double sum = 0.0;
  double previous = 0.0;
  for (std::size_t i = 1; i < partition.size(); ++i) {
    if (!(partition[i] > partition[i - 1])) throw PreconditionError("partition must be strictly increasing");
    const double f = lommel_f(alpha, partition[i]);
    sum += (f - previous) * certificate_weight(j, partition[i]);
    previous = f;
  }
  return sum;
}

std::vector<double> certificate_partition(double j, int level) {
  if (level < 0 || level > 20) throw PreconditionError("partition level out of range");
  const std::size_t per_octave = std::size_t{1} << level;
  const std::size_t count = (6 + static_cast<std::size_t>(level)) * per_octave;
  std::vector<double> points(count + 2);
  points[0] = 0.0;
  for (std::size_t i = 0; i <= count; ++i)
    points[count + 1 - i] = j * std::exp2(-static_cast<double>(i) / static_cast<double>(per_octave));
  points.back() = j;
  return points;
}

PartitionCertificate certify(int n, CertifyMode mode) {
  if (n < 2) throw PreconditionError("certificate requires n >= 2");
  if (mode == CertifyMode::Assert && n > 5)
    throw PreconditionError("the certificate is asserted only for 2 <= n <= 5");
  PartitionCertificate cert;
  cert.n = n;
  cert.alpha = n - 1.5;
  cert.j = first_root(cert.alpha);
  cert.first_integral = lommel_f(cert.alpha, cert.j);

  auto& checks = cert.cross_checks;
  for (int level = 0;; ++level) {
    std::vector<double> partition = certificate_partition(cert.j, level);
    const double sum = lower_sum(cert.alpha, cert.j, partition);
    if (!checks.level_sums.empty() && sum < checks.level_sums.back()) checks.monotone = false;
    checks.level_points.push_back(partition.size());
    checks.level_sums.push_back(sum);
    cert.partition = std::move(partition);
    cert.lower_sum = sum;
    if (sum > 4.0) break;
    if (certificate_partition(cert.j, level + 1).size() > kMaxPartitionPoints) break;
  }

  const double alpha = cert.alpha;
  const double j = cert.j;
  auto density = [&](double t) {
    const double a = bessel_j(alpha + 1.0, t);
    const double b = bessel_j(alpha, t);
    return t * (a * a + b * b);
  };
  checks.first_integral_quadrature = detail::integrate(density, 0.0, j, "first integral");
  checks.integral_quadrature =
      n == 2 ? kInfinity
             : detail::integrate([&](double t) { return density(t) * certificate_weight(j, t); }, 0.0, j,
                                 "weighted integral");

  if (!(cert.first_integral < 4.0))
    cert.status = CertificateStatus::Failed;
  else if (cert.lower_sum > 4.0)
    cert.status = CertificateStatus::Certified;
  else
    cert.status = CertificateStatus::Inconclusive;
  cert.verdict = cert.status == CertificateStatus::Certified;
  return cert;
}

}  // namespace conelab
