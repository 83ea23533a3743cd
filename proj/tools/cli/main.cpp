// conelab command-line tool.
//
// Exit codes: 0 success, 1 usage, 2 precondition or I/O error, 3 numerical
// non-convergence, 4 certificate not established (or a failing reproduction).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "conelab/bessel.hpp"
#include "conelab/cone_analysis.hpp"
#include "conelab/errors.hpp"
#include "conelab/optimizer.hpp"
#include "conelab/perturbation.hpp"
#include "conelab/reports.hpp"
#include "conelab/transformations.hpp"
#include "conelab_reproduce/criteria.hpp"

namespace {

using namespace conelab;

struct RunConfig {
  std::string command;
  int n = 2;
  double p = 2.0;
  double x0 = 1.0;
  double y0 = 1.0;
  double radius = 1.0;
  double s = 0.2;
  double delta = 0.02;
  std::vector<double> s_grid{0.05, 0.1, 0.2};
  int levels = 0;  // 0: the command's default
  std::size_t base = 128;
  std::uint64_t seed = 1;
  std::string output;  // empty: stdout
  std::string format = "json";
  std::string table_format = "csv";  // bessel-roots
  std::string curve;
  std::string curve_out;
  std::string transform = "canonicalize";
  std::string trace;
  std::string mode;  // certify: assert or report
  int restarts = 8;
  std::size_t evaluations = 600;
  std::size_t knots = 12;
  std::size_t nodes = 512;
  double nu_min = 0.0;
  double nu_max = 10.0;
  double nu_step = 0.5;
  bool timing = false;
  std::vector<int> criteria;
};

int levels_or(const RunConfig& c, int fallback) { return c.levels > 0 ? c.levels : fallback; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

ProfileCurve load_curve(const std::string& path) {
  if (path.empty()) throw PreconditionError("--curve is required");
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open curve file '" + path + "'");
  return read_curve_csv(in);
}

void save_curve(const std::string& path, const ProfileCurve& curve) {
  if (path.empty()) return;
  std::ostringstream out;
  write_curve_csv(out, curve);
  write_text(path, out.str());
}

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

void emit(const RunConfig& c, Json config, Json result) {
  write_text(c.output, dump(envelope(c.command, std::move(config), std::move(result))));
}

int run_eigen(const RunConfig& c) {
  const ProfileCurve curve = load_curve(c.curve);
  RefinementOptions refinement;
  refinement.levels = levels_or(c, 4);
  const EigenSolution sol = refine_and_extrapolate(curve, c.p, c.n, refinement);
  if (c.format == "csv") {
    std::string text = "t,phi\n";
    for (std::size_t i = 0; i < sol.phi.size(); ++i) text += csv_number(sol.t[i]) + "," + csv_number(sol.phi[i]) + "\n";
    write_text(c.output, text);
    return 0;
  }
  emit(c, {{"curve", c.curve}, {"n", c.n}, {"p", c.p}, {"levels", refinement.levels}, {"format", c.format}},
       to_json(sol));
  return 0;
}

int run_cone(const RunConfig& c) {
  const RefinementOptions refinement{levels_or(c, 3), c.base, {}};
  const BoundaryOrbit orbit(c.n, c.radius, c.radius);
  const EigenSolution sol = refine_and_extrapolate(
      CurveFamily([&](std::size_t m) { return cone_curve(orbit, m); }), c.p, c.n, refinement);
  Json result;
  result["radius"] = c.radius;
  if (c.p == 2.0) {
    const double closed = cone_lambda_p2(c.n, c.radius);
    result["closed_form"] = closed;
    result["relative_difference"] = number(std::abs(sol.lambda - closed) / closed);
  } else {
    result["closed_form"] = nullptr;
  }
  result["solver"] = to_json(sol);
  result["cone_ball"] = to_json(cone_ball_relation_check(c.n, c.p, refinement));
  emit(c, {{"n", c.n}, {"p", c.p}, {"radius", c.radius}, {"levels", refinement.levels}, {"base", c.base}}, result);
  return 0;
}

int run_certify(const RunConfig& c) {
  std::string mode = c.mode.empty() ? (c.n <= 5 ? "assert" : "report") : c.mode;
  const CertifyMode m = mode == "assert" ? CertifyMode::Assert : CertifyMode::Report;
  const PartitionCertificate cert = certify(c.n, m);
  emit(c, {{"n", c.n}, {"mode", mode}}, to_json(cert));
  return reproduce::certificate_exit_code(cert, m);
}

int run_perturb(const RunConfig& c) {
  RefinementOptions refinement = perturbation_refinement();
  refinement.levels = levels_or(c, refinement.levels);
  refinement.base_elements = c.base;
  const PerturbationReport report = perturbation_scan(c.n, c.s_grid, refinement);
  if (c.format == "csv") {
    std::ostringstream out;
    write_perturbation_csv(out, report);
    write_text(c.output, out.str());
    return 0;
  }
  emit(c, {{"n", c.n}, {"s", c.s_grid}, {"levels", refinement.levels}, {"base", c.base}, {"format", c.format}},
       to_json(report));
  return 0;
}

int run_roundoff(const RunConfig& c) {
  const RefinementOptions refinement{levels_or(c, 4), c.base, {}};
  const EigenSolution sol = refine_and_extrapolate(
      CurveFamily([&](std::size_t m) { return roundoff_curve(c.s, c.delta, m); }), 2.0, c.n, refinement);
  const EigenSolution tilted = lambda_sigma_s(c.n, c.s);
  const double cone = cone_lambda_p2(c.n);
  save_curve(c.curve_out, roundoff_curve(c.s, c.delta, c.base << (refinement.levels - 1)));  // finest grid
  Json result;
  result["tangency"] = roundoff_tangency(c.s, c.delta);
  result["cone_lambda"] = cone;
  result["sigma_s"] = {{"lambda", number(tilted.lambda)}, {"error_bar", number(tilted.error_bar)}};
  result["margin"] = number(sol.lambda - cone);
  result["margin_error_bar"] = number(sol.error_bar);
  result["beats_cone"] = sol.lambda - sol.error_bar > cone;
  result["roundoff"] = to_json(sol);
  emit(c,
       {{"n", c.n}, {"s", c.s}, {"delta", c.delta}, {"levels", refinement.levels}, {"base", c.base},
        {"curve_out", c.curve_out}},
       result);
  return 0;
}

int run_transform(const RunConfig& c) {
  const ProfileCurve curve = load_curve(c.curve);
  RefinementOptions refinement;
  refinement.levels = levels_or(c, 3);
  const TransformReport report = apply_transform(c.transform, curve, c.p, c.n, refinement);
  save_curve(c.curve_out, report.output);
  emit(c,
       {{"curve", c.curve}, {"op", c.transform}, {"n", c.n}, {"p", c.p}, {"levels", refinement.levels},
        {"curve_out", c.curve_out}, {"timing", c.timing}},
       to_json(report, c.curve, c.curve_out, c.timing));
  return 0;
}

int run_optimize(const RunConfig& c) {
  const BoundaryOrbit orbit(c.n, c.x0, c.y0);
  OptimizerConfig config;
  config.knots = c.knots;
  config.nodes = c.nodes;
  config.restarts = c.restarts;
  config.max_evaluations = c.evaluations;
  config.seed = c.seed;
  config.final_refinement.levels = levels_or(c, config.final_refinement.levels);
  const OptimizerResult result = maximize(orbit, c.p, config);
  const std::vector<BaselineRow> rows = compare_baselines(orbit, c.p, &result);
  const BaselineRow& reference = rows.front();  // the cone when the orbit is symmetric, else the cylinder
  if (!c.trace.empty()) {
    std::string lines;
    for (const TraceEntry& e : result.trace) lines += to_json(e).dump() + "\n";
    write_text(c.trace, lines);
  }
  save_curve(c.curve_out, result.curve);
  Json out;
  out["reference"] = reference.name;
  out["margin"] = number(result.solution.lambda - reference.lambda);
  out["margin_error_bar"] = number(result.solution.error_bar + reference.error_bar);
  out["beats_reference"] =
      result.solution.lambda - reference.lambda > result.solution.error_bar + reference.error_bar;
  out["baselines"] = to_json(rows);
  out["optimizer"] = to_json(result);
  emit(c,
       {{"n", c.n}, {"p", c.p}, {"x0", c.x0}, {"y0", c.y0}, {"seed", c.seed}, {"restarts", c.restarts},
        {"evaluations", c.evaluations}, {"knots", c.knots}, {"nodes", c.nodes},
        {"levels", config.final_refinement.levels}, {"trace", c.trace}, {"curve_out", c.curve_out}},
       out);
  return 0;
}

int run_bessel_roots(const RunConfig& c) {
  if (!(c.nu_step > 0.0) || c.nu_max < c.nu_min) throw PreconditionError("need nu_step > 0 and nu_max >= nu_min");
  std::vector<double> orders;
  for (int k = 0;; ++k) {
    const double nu = c.nu_min + k * c.nu_step;
    if (nu > c.nu_max + 1e-12 * c.nu_step) break;
    orders.push_back(nu);
  }
  std::vector<double> roots;
  for (double nu : orders) roots.push_back(first_root(nu));
  if (c.table_format == "json") {
    Json table = Json::array();
    for (std::size_t i = 0; i < orders.size(); ++i) table.push_back({{"nu", orders[i]}, {"j", roots[i]}});
    emit(c, {{"nu_min", c.nu_min}, {"nu_max", c.nu_max}, {"nu_step", c.nu_step}, {"format", c.table_format}}, table);
    return 0;
  }
  std::string text = "nu,j\n";
  for (std::size_t i = 0; i < orders.size(); ++i) text += csv_number(orders[i]) + "," + csv_number(roots[i]) + "\n";
  write_text(c.output, text);
  return 0;
}

int run_reproduce_all(const RunConfig& c) {
  std::vector<int> ids = c.criteria;
  if (ids.empty())
    for (int k = 1; k <= reproduce::kCriterionCount; ++k) ids.push_back(k);
  std::vector<reproduce::CriterionResult> results;
  bool all = true;
  for (int id : ids) {
    results.push_back(reproduce::run_criterion(id));
    std::fprintf(stderr, "criterion %d %s: %s (%.1f s)\n", id, results.back().passed() ? "PASS" : "FAIL",
                 results.back().title.c_str(), results.back().seconds);
    all = all && results.back().passed();
  }
  write_text(c.output, reproduce::markdown_summary(results));
  return all ? 0 : 4;
}

int dispatch(const RunConfig& c) {
  if (c.command == "eigen") return run_eigen(c);
  if (c.command == "cone") return run_cone(c);
  if (c.command == "certify") return run_certify(c);
  if (c.command == "perturb") return run_perturb(c);
  if (c.command == "roundoff") return run_roundoff(c);
  if (c.command == "transform") return run_transform(c);
  if (c.command == "optimize") return run_optimize(c);
  if (c.command == "bessel-roots") return run_bessel_roots(c);
  if (c.command == "reproduce-all") return run_reproduce_all(c);
  throw PreconditionError("unknown command '" + c.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"conelab: first eigenvalues of rotation-invariant hypersurfaces"};
  app.require_subcommand(1);

  auto output = [&](CLI::App* sub) { sub->add_option("-o,--output", c.output, "output file (default stdout)"); };
  auto n_option = [&](CLI::App* sub, int lo) {
    sub->add_option("--n", c.n, "half dimension n")->check(CLI::Range(lo, 64))->capture_default_str();
  };
  auto p_option = [&](CLI::App* sub) {
    sub->add_option("--p", c.p, "exponent p >= 2")->check(CLI::Range(2.0, 1e6))->capture_default_str();
  };
  auto levels = [&](CLI::App* sub) { sub->add_option("--levels", c.levels, "grid levels")->check(CLI::Range(2, 12)); };
  auto base = [&](CLI::App* sub) {
    sub->add_option("--base", c.base, "elements on the coarsest grid")->check(CLI::Range(8, 1 << 20))
        ->capture_default_str();
  };
  auto format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };

  auto* eigen = app.add_subcommand("eigen", "solve the eigenvalue problem of a curve file");
  eigen->add_option("--curve", c.curve, "curve CSV (t,x,y)")->required();
  n_option(eigen, 2);
  p_option(eigen);
  levels(eigen);
  format(eigen);
  output(eigen);

  auto* cone = app.add_subcommand("cone", "cone closed form against the solver, and the ball relation");
  n_option(cone, 2);
  p_option(cone);
  cone->add_option("--radius", c.radius, "cone through (R, R)")->check(CLI::PositiveNumber)->capture_default_str();
  levels(cone);
  base(cone);
  output(cone);

  auto* cert = app.add_subcommand("certify", "partition certificate of the Lommel integral inequality");
  n_option(cert, 2);
  cert->add_option("--mode", c.mode, "assert (n <= 5) or report; default by n")
      ->check(CLI::IsMember({"assert", "report"}));
  output(cert);

  auto* perturb = app.add_subcommand("perturb", "scan lambda(sigma_s) over s");
  n_option(perturb, 2);
  perturb->add_option("--s", c.s_grid, "s values")->delimiter(',')->capture_default_str();
  levels(perturb);
  base(perturb);
  format(perturb);
  output(perturb);

  auto* round = app.add_subcommand("roundoff", "round-off of sigma_s against the cone");
  n_option(round, 2);
  round->add_option("--s", c.s, "tilt s")->check(CLI::PositiveNumber)->capture_default_str();
  round->add_option("--delta", c.delta, "disc offset delta < s")->check(CLI::PositiveNumber)->capture_default_str();
  round->add_option("--curve-out", c.curve_out, "write the round-off curve CSV here");
  levels(round);
  base(round);
  output(round);

  auto* transform = app.add_subcommand("transform", "apply a curve transformation and compare eigenvalues");
  transform->add_option("--curve", c.curve, "curve CSV (t,x,y)")->required();
  transform->add_option("--op", c.transform, "transformation")
      ->check(CLI::IsMember({"reparam_h", "reparam_g", "invert_to_ball", "u_monotonize", "ru_monotonize",
                             "canonicalize"}))
      ->capture_default_str();
  n_option(transform, 2);
  p_option(transform);
  levels(transform);
  transform->add_option("--curve-out", c.curve_out, "write the transformed curve CSV here");
  transform->add_flag("--timing", c.timing, "include per-stage timings (not reproducible)");
  output(transform);

  auto* optimize = app.add_subcommand("optimize", "search for curves with large first eigenvalue");
  n_option(optimize, 2);
  p_option(optimize);
  optimize->add_option("--x0", c.x0, "orbit x0")->check(CLI::PositiveNumber)->capture_default_str();
  optimize->add_option("--y0", c.y0, "orbit y0")->check(CLI::PositiveNumber)->capture_default_str();
  optimize->add_option("--seed", c.seed, "seed of the perturbed restarts")->capture_default_str();
  optimize->add_option("--restarts", c.restarts, "restarts")->check(CLI::Range(1, 1000))->capture_default_str();
  optimize->add_option("--evaluations", c.evaluations, "evaluations per restart")->capture_default_str();
  optimize->add_option("--knots", c.knots, "knots")->check(CLI::Range(3, 200))->capture_default_str();
  optimize->add_option("--nodes", c.nodes, "nodes per candidate")->capture_default_str();
  optimize->add_option("--trace", c.trace, "write the search trace (JSONL) here");
  optimize->add_option("--curve-out", c.curve_out, "write the best curve CSV here");
  levels(optimize);
  output(optimize);

  auto* roots = app.add_subcommand("bessel-roots", "table of first Bessel zeros j_{nu,1}");
  roots->add_option("--nu-min", c.nu_min, "first order")->check(CLI::Range(-0.5, 1e4))->capture_default_str();
  roots->add_option("--nu-max", c.nu_max, "last order")->check(CLI::Range(-0.5, 1e4))->capture_default_str();
  roots->add_option("--nu-step", c.nu_step, "order step")->capture_default_str();
  roots->add_option("--format", c.table_format, "csv or json")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  output(roots);

  auto* all = app.add_subcommand("reproduce-all", "run the acceptance criteria and write a Markdown summary");
  all->add_option("--criteria", c.criteria, "criteria to run (default all)")
      ->delimiter(',')
      ->check(CLI::Range(1, reproduce::kCriterionCount));
  output(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c);
  } catch (const ConvergenceError& e) {
    std::cerr << "conelab: " << e.what() << "\n" << e.diagnostics();
    return 3;
  } catch (const std::invalid_argument& e) {  // PreconditionError
    std::cerr << "conelab: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {  // DomainError
    std::cerr << "conelab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "conelab: " << e.what() << "\n";
    return 3;
  }
}
