#include "conelab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "conelab/errors.hpp"

namespace conelab {
namespace {

using Point = std::vector<double>;

Point affine(const Point& a, const Point& b, double weight) {
  // a + weight (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + weight * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options,
                             const std::function<void(const NelderMeadStep&)>& on_step) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw PreconditionError("Nelder-Mead needs at least one variable");
  NelderMeadResult result;
  auto eval = [&](const Point& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Point> simplex{x0};
  for (std::size_t i = 0; i < dim; ++i) {
    Point x = x0;
    x[i] += options.initial_step;
    simplex.push_back(std::move(x));
  }
  std::vector<double> values;
  for (const Point& x : simplex) values.push_back(eval(x));
  std::vector<std::size_t> order(dim + 1);

  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Point> s;
    std::vector<double> v;
    for (std::size_t k : order) {
      s.push_back(std::move(simplex[k]));
      v.push_back(values[k]);
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  sort_simplex();
  while (true) {
    if (on_step) on_step({result.iterations, result.evaluations, values.front(), simplex.front()});
    const double spread = values.back() - values.front();
    if (std::isfinite(spread) && spread <= options.tolerance * std::max(1.0, std::abs(values.front()))) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;
    ++result.iterations;

    Point centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k][i] / static_cast<double>(dim);
    const Point& worst = simplex.back();
    Point reflected = affine(centroid, worst, -1.0);
    const double fr = eval(reflected);
    if (fr < values.front()) {
      Point expanded = affine(centroid, worst, -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex.back() = std::move(expanded);
        values.back() = fe;
      } else {
        simplex.back() = std::move(reflected);
        values.back() = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex.back() = std::move(reflected);
      values.back() = fr;
    } else {
      const bool outside = fr < values.back();
      Point contracted = outside ? affine(centroid, reflected, 0.5) : affine(centroid, worst, 0.5);
      const double fc = eval(contracted);
      if (outside ? fc <= fr : fc < values.back()) {
        simplex.back() = std::move(contracted);
        values.back() = fc;
      } else {
        for (std::size_t k = 1; k <= dim; ++k) {
          simplex[k] = affine(simplex.front(), simplex[k], 0.5);
          values[k] = eval(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  result.point = simplex.front();
  result.value = values.front();
  return result;
}

}  // namespace conelab
