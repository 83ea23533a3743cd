#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace conelab {

struct NelderMeadOptions {
  std::size_t max_evaluations = 600;
  double initial_step = 0.1;
  double tolerance = 1e-10;  // stop when the simplex values spread less than this (relative)
};

struct NelderMeadStep {
  std::size_t iteration = 0;
  std::size_t evaluations = 0;
  double best = 0.0;
  std::vector<double> point;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with the standard coefficients (1, 2, 1/2, 1/2). The initial
/// simplex adds `initial_step` to one coordinate at a time. `on_step` runs after every
/// iteration with the current best vertex; the best value never increases.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options = {},
                             const std::function<void(const NelderMeadStep&)>& on_step = {});

}  // namespace conelab
