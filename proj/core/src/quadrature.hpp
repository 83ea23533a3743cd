#pragma once

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "conelab/errors.hpp"

namespace conelab::detail {

// Adaptive Gauss-Kronrod on [a, b]. The depth is raised until the error estimate drops
// below `tolerance` relative to the value; the depths tried go into the error message.
template <class F>
double integrate(F&& f, double a, double b, const char* what, double tolerance = 1e-12) {
  std::string trace;
  for (unsigned depth : {10u, 15u, 20u, 25u}) {
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, 1e-15, &error);
    if (std::isfinite(value) && error <= tolerance * std::max(std::abs(value), 1e-300)) return value;
    trace += "depth " + std::to_string(depth) + ": value " + std::to_string(value) + " error " +
             std::to_string(error) + "\n";
  }
  throw ConvergenceError(std::string(what) + ": quadrature did not converge", trace);
}

}  // namespace conelab::detail
