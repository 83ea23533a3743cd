#pragma once

namespace conelab {

/// Bessel function of the first kind J_nu(x) for nu >= -1/2, x >= 0.
///
/// Ascending series for x <= 12, Miller backward recurrence normalized by
/// the Neumann sum above. Both run in extended precision.
double bessel_j(double nu, double x);

/// x^(-nu) J_nu(x), an entire function of x; equals 2^(-nu) / Gamma(nu + 1) at x = 0.
double bessel_j_scaled(double nu, double x);

/// First positive zero j_{nu,1} of J_nu. Sign-change scan from nu + 1 in steps of pi/8,
/// then bisection to a bracket of width 1e-13. Throws ConvergenceError if no sign
/// change appears within the scan bound.
double first_root(double nu);

/// f(t) = (t^2/2)(J_{a+1}^2 - J_{a+2} J_a + J_a^2 - J_{a+1} J_{a-1}), the antiderivative
/// of t (J_{a+1}(t)^2 + J_a(t)^2) with f(0) = 0. Requires alpha >= 1/2.
double lommel_f(double alpha, double t);

/// The first Dirichlet eigenfunction of the radial cone problem in the variable t,
/// phi(t) = (1-t)^(-a/2) J_a(j sqrt(1-t)) with a = n - 3/2 and j = j_{a,1}.
class ConeEigenfunction {
 public:
  explicit ConeEigenfunction(int n);

  int n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double root() const noexcept { return root_; }

  /// phi(t) for 0 <= t <= 1; at t = 1 the value is the limit (j/2)^a / Gamma(a+1).
  double value(double t) const;
  /// phi'(t) = (j/2)(1-t)^(-(a+1)/2) J_{a+1}(j sqrt(1-t)).
  double derivative(double t) const;

 private:
  int n_;
  double alpha_;
  double root_;
};

double phi_sigma(int n, double t);
double phi_sigma_prime(int n, double t);

}  // namespace conelab
