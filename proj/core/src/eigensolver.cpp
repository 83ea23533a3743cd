#include "conelab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "tridiagonal.hpp"

namespace conelab {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_exponent(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw PreconditionError("exponent p must be finite and >= 2");
}

void require_nodal(const WeightedRayleighProblem& problem, std::span<const double> w) {
  if (w.size() != problem.nodes())
    throw PreconditionError("nodal vector length does not match the problem");
}

double power_abs(double x, double p) { return p == 2.0 ? x * x : std::pow(std::abs(x), p); }

// Stiffness and mass pencils of the p = 2 problem on the free nodes 1..M.
std::pair<detail::SymTridiagonal, detail::SymTridiagonal> p2_pencil(
    const WeightedRayleighProblem& problem) {
  const std::size_t m = problem.elements();
  detail::SymTridiagonal k{std::vector<double>(m, 0.0), std::vector<double>(m - 1, 0.0)};
  detail::SymTridiagonal mass{std::vector<double>(m, 0.0), std::vector<double>(m - 1, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    const double e = problem.a[i] / problem.dt[i];
    const double f = problem.b[i] * problem.dt[i] / 4.0;
    // Element i joins node i (free index i-1) and node i+1 (free index i).
    k.diag[i] += e;
    mass.diag[i] += f;
    if (i > 0) {
      k.diag[i - 1] += e;
      mass.diag[i - 1] += f;
      k.off[i - 1] -= e;
      mass.off[i - 1] += f;
    }
  }
  return {std::move(k), std::move(mass)};
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Projects to |w| with max 1; returns false when w vanishes.
bool normalize_positive(std::vector<double>& w) {
  double m = 0.0;
  for (double& v : w) {
    v = std::abs(v);
    m = std::max(m, v);
  }
  if (!(m > 0.0) || !std::isfinite(m)) return false;
  for (double& v : w) v /= m;
  w.front() = 0.0;
  return true;
}

struct Derivatives {
  double numerator = 0.0;
  double denominator = 0.0;
  std::vector<double> grad_n;  // free nodes 1..M
  std::vector<double> grad_d;
  detail::SymTridiagonal hess_n;
  detail::SymTridiagonal hess_d;
};

// `floor` > 0 bounds |increment| and |mid| from below by that fraction of their maxima
// in the Hessians only, which keeps them nonsingular where w is locally flat. Increments
// rather than slopes keep this independent of how the nodes are labelled.
Derivatives derivatives(const WeightedRayleighProblem& problem, std::span<const double> w,
                        double floor = 0.0) {
  const std::size_t m = problem.elements();
  const double p = problem.p;
  double step_floor = 0.0;
  double mid_floor = 0.0;
  if (floor > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      step_floor = std::max(step_floor, std::abs(w[i + 1] - w[i]));
      mid_floor = std::max(mid_floor, std::abs(w[i] + w[i + 1]) / 2);
    }
    step_floor *= floor;
    mid_floor *= floor;
  }
  Derivatives d;
  d.grad_n.assign(m, 0.0);
  d.grad_d.assign(m, 0.0);
  d.hess_n = {std::vector<double>(m, 0.0), std::vector<double>(m - 1, 0.0)};
  d.hess_d = {std::vector<double>(m, 0.0), std::vector<double>(m - 1, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    const double h = problem.dt[i];
    const double slope = (w[i + 1] - w[i]) / h;
    const double mid = 0.5 * (w[i] + w[i + 1]);
    const double as = std::abs(slope);
    const double am = std::abs(mid);
    const double sp2 = p == 2.0 ? 1.0 : std::pow(as, p - 2.0);
    const double mp2 = p == 2.0 ? 1.0 : std::pow(am, p - 2.0);
    d.numerator += problem.a[i] * sp2 * as * as * h;
    d.denominator += problem.b[i] * mp2 * am * am * h;
    const double gn = p * problem.a[i] * sp2 * slope;
    const double gd = 0.5 * p * problem.b[i] * mp2 * mid * h;
    const double slope_floor = step_floor / h;
    const double hs = as >= slope_floor || p == 2.0 ? sp2 : std::pow(slope_floor, p - 2.0);
    const double hm = am >= mid_floor || p == 2.0 ? mp2 : std::pow(mid_floor, p - 2.0);
    const double hn = p * (p - 1.0) * problem.a[i] * hs / h;
    const double hd = 0.25 * p * (p - 1.0) * problem.b[i] * hm * h;
    d.grad_n[i] += gn;
    d.grad_d[i] += gd;
    d.hess_n.diag[i] += hn;
    d.hess_d.diag[i] += hd;
    if (i > 0) {
      d.grad_n[i - 1] -= gn;
      d.grad_d[i - 1] += gd;
      d.hess_n.diag[i - 1] += hn;
      d.hess_d.diag[i - 1] += hd;
      d.hess_n.off[i - 1] -= hn;
      d.hess_d.off[i - 1] += hd;
    }
  }
  return d;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

// One step of the nonlinear inverse power method: u solves grad N(u) = grad D(w), so
// R(u) <= R(w) for positive w. In one dimension the system telescopes from the free
// end: p a_i |s_i|^(p-2) s_i equals the sum of grad D(w) over the nodes after element i.
std::optional<std::vector<double>> inverse_power_step(const WeightedRayleighProblem& problem,
                                                      std::span<const double> w) {
  const std::size_t m = problem.elements();
  const double p = problem.p;
  const std::vector<double> g = derivatives(problem, w).grad_d;
  std::vector<double> u(m + 1, 0.0);
  double tail = 0.0;
  std::vector<double> slope(m);
  for (std::size_t i = m; i-- > 0;) {
    tail += g[i];
    const double sigma = tail / (p * problem.a[i]);
    slope[i] = std::copysign(std::pow(std::abs(sigma), 1.0 / (p - 1.0)), sigma);
  }
  for (std::size_t i = 0; i < m; ++i) u[i + 1] = u[i] + slope[i] * problem.dt[i];
  for (double v : u)
    if (!std::isfinite(v)) return std::nullopt;
  return u;
}

struct DescentResult {
  double lambda = kInfinity;
  std::vector<double> w;
  double residual = kInfinity;
  int iterations = 0;
  bool converged = false;
  std::string note;
};

DescentResult descend(const WeightedRayleighProblem& problem, std::vector<double> w,
                      const GeneralPOptions& options) {
  DescentResult out;
  if (!normalize_positive(w)) {
    out.note = "start vector vanishes";
    return out;
  }
  const std::size_t m = problem.elements();
  const double p = problem.p;
  double r = rayleigh_quotient(problem, w);
  std::vector<double> trial(w.size());

  // Near the minimum the quotient changes by less than its rounding noise, so a full
  // Newton step is also accepted when it does not raise R beyond that noise.
  double last_tau = 1.0;
  auto try_direction = [&](std::span<const double> direction, double slope, double noise) -> bool {
    double tau = 1.0;
    for (int halving = 0; halving < 60; ++halving, tau *= 0.5) {
      trial[0] = 0.0;
      for (std::size_t j = 1; j <= m; ++j) trial[j] = w[j] + tau * direction[j - 1];
      if (!normalize_positive(trial)) continue;
      const double rt = rayleigh_quotient(problem, trial);
      const double armijo = slope < 0.0 ? 1e-4 * tau * slope : 0.0;
      if (rt < r + armijo || (halving == 0 && rt <= r * (1.0 + noise))) {
        w.swap(trial);
        r = rt;
        last_tau = tau;
        return true;
      }
    }
    return false;
  };

  // Inverse power steps until R settles, Newton from there. Newton far from the
  // minimizer tends to creep along with tiny accepted steps.
  auto power_step = [&]() -> bool {
    auto u = inverse_power_step(problem, w);
    if (!u || !normalize_positive(*u)) return false;
    const double ru = rayleigh_quotient(problem, *u);
    if (!(ru < r)) return false;
    w = std::move(*u);
    r = ru;
    return true;
  };
  for (int it = 0; it < 200; ++it) {
    const double before = r;
    if (!power_step() || before - r <= 1e-4 * r) break;
  }

  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const Derivatives d = derivatives(problem, w);
    std::vector<double> residual_vec(m);
    for (std::size_t j = 0; j < m; ++j) residual_vec[j] = d.grad_n[j] - r * d.grad_d[j];
    const double residual = max_abs(residual_vec) / std::max(max_abs(d.grad_n), 1e-300);
    const double before = r;
    std::vector<double> grad_r(m);
    for (std::size_t j = 0; j < m; ++j) grad_r[j] = residual_vec[j] / d.denominator;

    bool moved = false;
    // Newton step on the constrained Euler-Lagrange system, first with the exact
    // Hessians and then with flat regions regularized.
    for (double floor : {0.0, 1e-2}) {
      const Derivatives& h = floor == 0.0 ? d : derivatives(problem, w, floor);
      detail::SymTridiagonal shifted = h.hess_n;
      for (std::size_t j = 0; j < m; ++j) shifted.diag[j] -= r * h.hess_d.diag[j];
      for (std::size_t j = 0; j + 1 < m; ++j) shifted.off[j] -= r * h.hess_d.off[j];
      if (auto y = detail::solve_pivoted(shifted, d.grad_d)) {
        const double denom = dot(d.grad_d, *y);
        if (denom != 0.0 && std::isfinite(denom)) {
          const double mu = p * d.denominator / ((p - 1.0) * denom);
          std::vector<double> direction(m);
          for (std::size_t j = 0; j < m; ++j)
            direction[j] = (p - 2.0) / (p - 1.0) * w[j + 1] + mu * (*y)[j] - w[j + 1];
          moved = try_direction(direction, dot(grad_r, direction), floor == 0.0 ? 1e-14 : 0.0);
        }
      }
      if (moved || p == 2.0) break;
    }
    if (moved && last_tau < 0.125) {
      const double newton_r = r;
      const std::vector<double> newton_w = w;
      if (!power_step() && r > newton_r) {
        w = newton_w;
        r = newton_r;
      }
    }
    if (!moved) moved = power_step();
    if (!moved) {
      // Preconditioned gradient fallback.
      const Derivatives h = derivatives(problem, w, 1e-2);
      detail::SymTridiagonal precond = h.hess_n;
      double scale = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        precond.diag[j] += r * h.hess_d.diag[j];
        scale = std::max(scale, precond.diag[j]);
      }
      for (std::size_t j = 0; j + 1 < m; ++j) precond.off[j] += r * h.hess_d.off[j];
      for (std::size_t j = 0; j < m; ++j) precond.diag[j] += 1e-12 * scale;
      if (auto g = detail::solve_pivoted(precond, grad_r)) {
        std::vector<double> direction(m);
        for (std::size_t j = 0; j < m; ++j) direction[j] = -(*g)[j];
        moved = try_direction(direction, dot(grad_r, direction), 0.0);
      }
    }
    if (!moved) {
      out.residual = residual;
      out.converged = residual < 1e-7;
      if (!out.converged) out.note = "line search failed at residual " + std::to_string(residual);
      break;
    }
    if (before - r <= options.tolerance * r) {
      const Derivatives after = derivatives(problem, w);
      double num = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        num = std::max(num, std::abs(after.grad_n[j] - r * after.grad_d[j]));
      out.residual = num / std::max(max_abs(after.grad_n), 1e-300);
      // Same floor as a failed line search; at large p the defect stalls near 1e-8.
      if (out.residual < 1e-7) {
        out.converged = true;
        break;
      }
    }
  }
  out.lambda = r;
  if (!std::isfinite(out.residual)) out.residual = euler_lagrange_residual(problem, w, r);
  out.w = std::move(w);
  if (!out.converged && out.note.empty()) out.note = "iteration limit reached";
  return out;
}

std::vector<double> perturbed_seed(std::span<const double> seed, std::span<const double> node_t,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double c[4];
  for (int k = 0; k < 4; ++k) c[k] = coef(rng) / (k + 1);
  std::vector<double> w(seed.begin(), seed.end());
  for (std::size_t j = 0; j < w.size(); ++j) {
    double bump = 0.0;
    for (int k = 0; k < 4; ++k) bump += c[k] * std::sin((k + 1) * std::numbers::pi * node_t[j]);
    w[j] *= std::exp(0.5 * bump);
  }
  return w;
}

}  // namespace

WeightedRayleighProblem assemble(const ProfileCurve& curve, double p, int n, WeightScale scale) {
  require_exponent(p);
  const double threshold = 1e-14 * length_g(curve);
  WeightedRayleighProblem problem;
  problem.p = p;
  problem.n = n;
  problem.node_t.push_back(curve.node(0));
  std::size_t start = 0;
  for (std::size_t i = 0; i < curve.elements(); ++i) {
    const Point a = curve.point(start);
    const Point b = curve.point(i + 1);
    const double chord = std::hypot(b.x - a.x, b.y - a.y);
    if (!(chord >= threshold) || chord == 0.0) {
      ++problem.contracted;
      continue;
    }
    const double h = curve.node(i + 1) - curve.node(start);
    const double speed = chord / h;
    const double f = weight_F({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, n, scale);
    problem.a.push_back(f / std::pow(speed, p - 1.0));
    problem.b.push_back(f * speed);
    problem.dt.push_back(h);
    problem.node_t.push_back(curve.node(i + 1));
    start = i + 1;
  }
  if (problem.a.empty()) throw PreconditionError("curve has zero length");
  if (start != curve.elements()) {
    // Trailing degenerate elements: the last retained node stands for the endpoint.
    problem.node_t.back() = curve.node(curve.elements());
  }
  return problem;
}

WeightedRayleighProblem radial_ball_problem(int dimension, double p, std::size_t elements) {
  require_exponent(p);
  if (dimension < 1) throw PreconditionError("ball dimension must be positive");
  auto t = uniform_nodes(elements);
  std::vector<double> a(elements), b(elements);
  for (std::size_t i = 0; i < elements; ++i) {
    const double mid = 1.0 - 0.5 * (t[i] + t[i + 1]);
    a[i] = b[i] = std::pow(mid, dimension - 1);
  }
  auto problem = weighted_problem(p, std::move(t), std::move(a), std::move(b));
  problem.n = 0;
  return problem;
}

WeightedRayleighProblem weighted_problem(double p, std::vector<double> node_t, std::vector<double> a,
                                         std::vector<double> b) {
  require_exponent(p);
  if (node_t.size() < 2 || a.size() + 1 != node_t.size() || b.size() != a.size())
    throw PreconditionError("weighted problem: inconsistent array lengths");
  WeightedRayleighProblem problem;
  problem.p = p;
  problem.dt.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    problem.dt[i] = node_t[i + 1] - node_t[i];
    if (!(problem.dt[i] > 0.0) || !(a[i] > 0.0) || !(b[i] > 0.0))
      throw PreconditionError("weighted problem: widths and weights must be positive");
  }
  problem.a = std::move(a);
  problem.b = std::move(b);
  problem.node_t = std::move(node_t);
  return problem;
}

double rayleigh_quotient(const WeightedRayleighProblem& problem, std::span<const double> w) {
  require_nodal(problem, w);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < problem.elements(); ++i) {
    const double h = problem.dt[i];
    num += problem.a[i] * power_abs((w[i + 1] - w[i]) / h, problem.p) * h;
    den += problem.b[i] * power_abs(0.5 * (w[i] + w[i + 1]), problem.p) * h;
  }
  if (!(den > 0.0)) return kInfinity;
  return num / den;
}

double euler_lagrange_residual(const WeightedRayleighProblem& problem, std::span<const double> w,
                               double lambda) {
  require_nodal(problem, w);
  const Derivatives d = derivatives(problem, w);
  double num = 0.0;
  for (std::size_t j = 0; j < d.grad_n.size(); ++j)
    num = std::max(num, std::abs(d.grad_n[j] - lambda * d.grad_d[j]));
  return num / std::max(max_abs(d.grad_n), 1e-300);
}

EigenSolution solve_p2(const WeightedRayleighProblem& problem) {
  if (problem.p != 2.0) throw PreconditionError("solve_p2 requires p = 2");
  const std::size_t m = problem.elements();
  const auto [k, mass] = p2_pencil(problem);

  // Upper bound from the test function w(t) = t.
  std::vector<double> probe(problem.node_t);
  double hi = rayleigh_quotient(problem, probe);
  double lo = 0.0;
  std::ostringstream trace;
  int expansions = 0;
  while (detail::count_below(k, mass, hi) == 0) {
    hi *= 2.0;
    if (++expansions > 200) throw ConvergenceError("solve_p2: no eigenvalue bracket", "");
  }
  int bisections = 0;
  while (hi - lo > 1e-15 * hi && hi > 1e-300) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (detail::count_below(k, mass, mid) >= 1)
      hi = mid;
    else
      lo = mid;
    ++bisections;
  }
  const double bracket = 0.5 * (lo + hi);

  std::vector<double> x(m, 1.0);
  const double shift = lo * (1.0 - 1e-10);
  int iterations = 0;
  for (; iterations < 8; ++iterations) {
    const std::vector<double> rhs = mass.multiply(x);
    auto next = detail::solve_shifted(k, mass, shift, rhs);
    if (!next) {
      trace << "singular shifted factorization at sigma = " << shift;
      throw ConvergenceError("solve_p2: inverse iteration broke down", trace.str());
    }
    const double scale = max_abs(*next);
    for (double& v : *next) v /= scale;
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) change = std::max(change, std::abs(std::abs((*next)[j]) - std::abs(x[j])));
    x = std::move(*next);
    if (change < 1e-14 && iterations > 0) break;
  }

  EigenSolution sol;
  sol.p = 2.0;
  sol.n = problem.n;
  sol.phi.assign(m + 1, 0.0);
  double total = 0.0;
  for (double v : x) total += v;
  const double sign = total < 0.0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < m; ++j) sol.phi[j + 1] = sign * x[j];
  sol.lambda = rayleigh_quotient(problem, sol.phi);
  if (std::abs(sol.lambda - bracket) > 1e-9 * sol.lambda) {
    trace << "bisection " << bracket << " vs quotient " << sol.lambda << " after " << bisections
          << " bisections, " << iterations << " inverse iterations";
    throw ConvergenceError("solve_p2: eigenvector does not reproduce the eigenvalue", trace.str());
  }
  const std::vector<double> kx = k.multiply(std::span<const double>(sol.phi).subspan(1));
  const std::vector<double> mx = mass.multiply(std::span<const double>(sol.phi).subspan(1));
  double defect = 0.0;
  for (std::size_t j = 0; j < m; ++j) defect = std::max(defect, std::abs(kx[j] - sol.lambda * mx[j]));
  sol.residual = defect / std::max(max_abs(kx), 1e-300);
  sol.t = problem.node_t;
  sol.nodes = m + 1;
  sol.iterations = iterations + 1;
  sol.grid_levels = {m + 1};
  sol.level_lambdas = {sol.lambda};
  return sol;
}

EigenSolution solve_general_p(const WeightedRayleighProblem& problem,
                              std::optional<std::span<const double>> seed,
                              const GeneralPOptions& options) {
  require_exponent(problem.p);
  std::vector<double> base;
  if (seed) {
    require_nodal(problem, *seed);
    base.assign(seed->begin(), seed->end());
  } else {
    // The p = 2 eigenvector of the same weights is the usual seed. Weights with a huge
    // dynamic range defeat the Sturm count; w = t serves then.
    WeightedRayleighProblem quadratic = problem;
    quadratic.p = 2.0;
    try {
      base = solve_p2(quadratic).phi;
    } catch (const ConvergenceError&) {
      base = problem.node_t;
    }
  }
  base.front() = 0.0;

  std::mt19937_64 rng(options.seed);
  std::vector<DescentResult> runs;
  const int starts = std::max(1, options.restarts);
  for (int k = 0; k < starts; ++k) {
    std::vector<double> start = k == 0 ? base : perturbed_seed(base, problem.node_t, rng);
    runs.push_back(descend(problem, std::move(start), options));
  }
  std::vector<double> candidates;
  std::ostringstream trace;
  std::size_t best = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    candidates.push_back(runs[k].lambda);
    trace << "start " << k << ": lambda " << runs[k].lambda << ", residual " << runs[k].residual
          << ", iterations " << runs[k].iterations << (runs[k].converged ? "" : ", " + runs[k].note)
          << "\n";
    if (runs[k].lambda < runs[best].lambda) best = k;
  }
  for (const auto& run : runs) {
    if (!run.converged)
      throw ConvergenceError("general-p descent did not converge", trace.str());
  }
  const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
  if (*hi - *lo > options.agreement * *lo) throw NonconvexArtifactError(candidates, trace.str());

  EigenSolution sol;
  sol.p = problem.p;
  sol.n = problem.n;
  sol.lambda = runs[best].lambda;
  sol.phi = std::move(runs[best].w);
  sol.residual = euler_lagrange_residual(problem, sol.phi, sol.lambda);
  sol.t = problem.node_t;
  sol.nodes = problem.nodes();
  for (const auto& run : runs) sol.iterations += run.iterations;
  sol.grid_levels = {problem.nodes()};
  sol.level_lambdas = {sol.lambda};
  return sol;
}

EigenSolution solve(const WeightedRayleighProblem& problem, const GeneralPOptions& options) {
  return problem.p == 2.0 ? solve_p2(problem) : solve_general_p(problem, std::nullopt, options);
}

Extrapolation extrapolate_levels(std::span<const double> lambdas, std::optional<double> order) {
  if (lambdas.size() < 2) throw PreconditionError("extrapolation needs at least two levels");
  const std::size_t count = lambdas.size();
  Extrapolation out;
  double q = 2.0;
  if (order) {
    q = *order;
  } else if (count >= 3) {
    const double d1 = lambdas[count - 2] - lambdas[count - 3];
    const double d2 = lambdas[count - 1] - lambdas[count - 2];
    if (d1 != 0.0 && d2 != 0.0 && (d1 > 0.0) == (d2 > 0.0))
      q = std::clamp(std::log2(std::abs(d1 / d2)), 0.5, 6.0);
  }
  out.order = q;
  const double factor = std::pow(2.0, q) - 1.0;
  auto extrapolated = [&](std::size_t level) {
    return lambdas[level] + (lambdas[level] - lambdas[level - 1]) / factor;
  };
  out.value = extrapolated(count - 1);
  // With exactly three levels and a fitted order the last two extrapolants coincide,
  // so the size of the correction serves as the error bar there.
  if (count >= 4 || (count == 3 && order))
    out.error_bar = std::abs(out.value - extrapolated(count - 2));
  else
    out.error_bar = std::abs(lambdas[count - 1] - lambdas[count - 2]) / factor;
  out.error_bar = std::max(out.error_bar, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value));
  const double noise = 1e-13 * std::abs(lambdas[count - 1]);
  for (std::size_t k = 2; k < count; ++k) {
    const double d1 = lambdas[k - 1] - lambdas[k - 2];
    const double d2 = lambdas[k] - lambdas[k - 1];
    if (std::abs(d2) > noise && (std::abs(d2) > std::abs(d1) + noise || (d1 > 0.0) != (d2 > 0.0)))
      out.monotone = false;
  }
  return out;
}

EigenSolution refine_and_extrapolate(const ProblemFamily& family, double p,
                                     const RefinementOptions& options) {
  if (options.levels < 2) throw PreconditionError("refinement needs at least two levels");
  require_exponent(p);
  std::vector<double> lambdas;
  std::vector<std::size_t> nodes;
  EigenSolution finest;
  for (int level = 0; level < options.levels; ++level) {
    const std::size_t elements = options.base_elements << level;
    WeightedRayleighProblem problem = family(elements);
    if (problem.p != p) throw PreconditionError("problem family returned a different exponent");
    EigenSolution sol;
    if (p == 2.0) {
      sol = solve_p2(problem);
    } else {
      sol = solve_general_p(problem, std::nullopt, options.general);
    }
    lambdas.push_back(sol.lambda);
    nodes.push_back(sol.nodes);
    finest = std::move(sol);
  }
  const Extrapolation ex =
      extrapolate_levels(lambdas, p == 2.0 ? std::optional<double>(2.0) : std::nullopt);
  finest.lambda = ex.value;
  finest.error_bar = ex.error_bar;
  finest.observed_order = ex.order;
  finest.grid_levels = std::move(nodes);
  finest.level_lambdas = std::move(lambdas);
  if (!ex.monotone) finest.warnings.push_back("non-monotone level sequence");
  if (p != 2.0 && options.levels < 3) finest.warnings.push_back("convergence order assumed to be 2");
  return finest;
}

EigenSolution refine_and_extrapolate(const CurveFamily& family, double p, int n,
                                     const RefinementOptions& options) {
  return refine_and_extrapolate(
      ProblemFamily([&](std::size_t elements) { return assemble(family(elements), p, n); }), p,
      options);
}

EigenSolution refine_and_extrapolate(const ProfileCurve& curve, double p, int n,
                                     const RefinementOptions& options) {
  const std::size_t base = curve.elements();
  RefinementOptions local = options;
  local.base_elements = base;
  return refine_and_extrapolate(
      ProblemFamily([&](std::size_t elements) {
        return assemble(curve.subdivided(elements / base), p, n);
      }),
      p, local);
}

}  // namespace conelab
