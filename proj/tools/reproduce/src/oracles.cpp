#include "conelab_reproduce/oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conelab::oracle {

double half_integer_j(int k, double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double scale = std::sqrt(2.0 / (std::numbers::pi * x));
  switch (k) {
    case -1:
      return scale * c;
    case 0:
      return scale * s;
    case 1:
      return scale * (s / x - c);
    case 2:
      return scale * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x);
    case 3:
      return scale * ((15.0 / (x * x * x) - 6.0 / x) * s - (15.0 / (x * x) - 1.0) * c);
    default:
      throw std::invalid_argument("half_integer_j: order not tabulated");
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double width) {
  double flo = f(lo);
  const double fhi = f(hi);
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: no sign change");
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double tan_root() {
  // tan x - x changes sign on (pi, 3pi/2); sin x - x cos x has the same root without poles.
  return bisect([](double x) { return std::sin(x) - x * std::cos(x); }, std::numbers::pi,
                1.5 * std::numbers::pi);
}

double half_integer_root(int k) {
  const double step = 0.01;
  double lo = 0.5 + k;
  for (double hi = lo + step; hi < 40.0; lo = hi, hi += step) {
    const double a = half_integer_j(k, lo);
    const double b = half_integer_j(k, hi);
    if ((a > 0.0) != (b > 0.0))
      return bisect([k](double x) { return half_integer_j(k, x); }, lo, hi);
  }
  throw std::runtime_error("half_integer_root: no root found");
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static constexpr std::array<double, 5> nodes = {0.1488743389816312, 0.4333953941292472,
                                                  0.6794095682990244, 0.8650633666889845,
                                                  0.9739065285171717};
  static constexpr std::array<double, 5> weights = {0.2955242247147529, 0.2692667193099963,
                                                    0.2190863625159820, 0.1494513491505806,
                                                    0.0666713443086881};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * h;
    const double half = 0.5 * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      panel += weights[k] * (f(mid - half * nodes[k]) + f(mid + half * nodes[k]));
    total += panel * half;
  }
  return total;
}

}  // namespace conelab::oracle
