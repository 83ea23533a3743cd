#pragma once

#include <functional>

// Reference values computed without the conelab Bessel kernel: elementary closed
// forms for half-integer orders and plain bisection.
namespace conelab::oracle {

/// J_{k+1/2}(x) for k = -1, 0, 1, 2, 3 from sin and cos. Loses accuracy for small x
/// when k >= 1 (cancellation); use x >= 1 there.
double half_integer_j(int k, double x);

/// Root of f in [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double width = 1e-14);

/// First positive root of tan x = x, i.e. j_{3/2,1}.
double tan_root();

/// First positive zero of J_{k+1/2} from the closed form, by scan and bisection.
double half_integer_root(int k);

/// Composite Gauss-Legendre (10 points) on n equal panels; for smooth integrands.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace conelab::oracle
