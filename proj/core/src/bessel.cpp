#include "conelab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "conelab/errors.hpp"

namespace conelab {
namespace {

using Extended = long double;

void require_order(double nu) {
  if (!(nu >= -0.5)) throw DomainError("bessel: order must be >= -1/2");
}

// The series is used up to x = 12 for every order. Beyond that the backward recurrence
// is accurate for all orders, while the series cancels badly once x exceeds the order.
double series_threshold(double) { return 12.0; }

// Sum_k (-1)^k (x/2)^(2k) / (k! Gamma(nu+k+1)), i.e. (x/2)^(-nu) J_nu(x).
Extended reduced_series(double nu, double x) {
  const Extended q = -Extended(x) * x / 4;
  Extended term = 1.0L / std::tgamma(Extended(nu) + 1);
  Extended sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (Extended(k) * (Extended(nu) + k));
    sum += term;
    if (std::abs(term) <= 1e-21L * std::abs(sum) && k > x / 2) break;
  }
  return sum;
}

// J_nu(x) by backward recurrence from a high order, normalized with
// (x/2)^nu = Gamma(nu+1) J_nu + Sum_{k>=1} (nu+2k) Gamma(nu+k)/k! J_{nu+2k}.
Extended miller(double nu, double x) {
  const int top = 2 * static_cast<int>(std::ceil((x + 60.0 + 30.0 * std::cbrt(x)) / 2.0));
  const Extended ex = x;
  Extended above = 0.0L;    // f_{k+1}
  Extended current = 1e-30L;  // f_k, starting at k = top
  Extended norm = 0.0L;
  auto coefficient = [nu](int k) -> Extended {
    const Extended a = Extended(nu) + k;
    return (Extended(nu) + 2 * k) * std::exp(std::lgamma(a) - std::lgamma(Extended(k) + 1));
  };
  for (int k = top; k >= 1; --k) {
    if (k % 2 == 0) norm += coefficient(k / 2) * current;
    const Extended below = 2 * (Extended(nu) + k) / ex * current - above;
    above = current;
    current = below;
    if (std::abs(current) > 1e1000L) {
      above *= 1e-1000L;
      current *= 1e-1000L;
      norm *= 1e-1000L;
    }
  }
  norm += std::tgamma(Extended(nu) + 1) * current;
  return current * std::pow(ex / 2, Extended(nu)) / norm;
}

}  // namespace

double bessel_j(double nu, double x) {
  require_order(nu);
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be nonnegative");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (x <= series_threshold(nu))
    return static_cast<double>(std::pow(Extended(x) / 2, Extended(nu)) * reduced_series(nu, x));
  return static_cast<double>(miller(nu, x));
}

double bessel_j_scaled(double nu, double x) {
  require_order(nu);
  if (!(x >= 0.0)) throw DomainError("bessel_j_scaled: argument must be nonnegative");
  if (x <= series_threshold(nu))
    return static_cast<double>(std::pow(0.5L, Extended(nu)) * reduced_series(nu, x));
  return static_cast<double>(miller(nu, x) / std::pow(Extended(x), Extended(nu)));
}

double first_root(double nu) {
  require_order(nu);
  const double step = std::numbers::pi / 8.0;
  const double bound = 2.0 * std::abs(nu) + 60.0;
  double lo = nu + 1.0;
  double f_lo = bessel_j(nu, lo);
  for (int k = 1; lo < bound; ++k) {
    const double hi = nu + 1.0 + k * step;
    const double f_hi = bessel_j(nu, hi);
    if ((f_lo > 0.0) != (f_hi > 0.0)) {
      double a = lo;
      double b = hi;
      const bool positive_left = f_lo > 0.0;
      while (b - a > 1e-13) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if ((bessel_j(nu, m) > 0.0) == positive_left)
          a = m;
        else
          b = m;
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  std::ostringstream trace;
  trace << "scanned [" << nu + 1.0 << ", " << lo << "] in steps of pi/8";
  throw ConvergenceError("first_root: no sign change of J_nu found", trace.str());
}

double lommel_f(double alpha, double t) {
  if (!(alpha >= 0.5)) throw DomainError("lommel_f: alpha must be >= 1/2");
  if (!(t >= 0.0)) throw DomainError("lommel_f: argument must be nonnegative");
  if (t == 0.0) return 0.0;
  const double jm = bessel_j(alpha - 1.0, t);
  const double j0 = bessel_j(alpha, t);
  const double j1 = bessel_j(alpha + 1.0, t);
  const double j2 = bessel_j(alpha + 2.0, t);
  return 0.5 * t * t * (j1 * j1 - j2 * j0 + j0 * j0 - j1 * jm);
}

ConeEigenfunction::ConeEigenfunction(int n) : n_(n), alpha_(n - 1.5), root_(0.0) {
  if (n < 2) throw PreconditionError("cone eigenfunction requires n >= 2");
  root_ = first_root(alpha_);
}

double ConeEigenfunction::value(double t) const {
  if (!(t >= 0.0) || t > 1.0) throw DomainError("phi_sigma: t must lie in [0, 1]");
  const double x = root_ * std::sqrt(1.0 - t);
  return std::pow(root_, alpha_) * bessel_j_scaled(alpha_, x);
}

double ConeEigenfunction::derivative(double t) const {
  if (!(t >= 0.0) || t > 1.0) throw DomainError("phi_sigma_prime: t must lie in [0, 1]");
  const double x = root_ * std::sqrt(1.0 - t);
  return 0.5 * root_ * std::pow(root_, alpha_ + 1.0) * bessel_j_scaled(alpha_ + 1.0, x);
}

double phi_sigma(int n, double t) { return ConeEigenfunction(n).value(t); }

double phi_sigma_prime(int n, double t) { return ConeEigenfunction(n).derivative(t); }

}  // namespace conelab
