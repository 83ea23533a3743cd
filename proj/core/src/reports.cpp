#include "conelab/reports.hpp"

#include <cmath>

namespace conelab {
namespace {

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

}  // namespace

const char* version() { return CONELAB_VERSION; }

Json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json to_json(const EigenSolution& s) {
  Json j;
  j["lambda"] = number(s.lambda);
  j["error_bar"] = number(s.error_bar);
  j["p"] = s.p;
  j["n"] = s.n;
  j["grid_levels"] = s.grid_levels;
  j["residual"] = number(s.residual);
  j["phi"] = numbers(s.phi);
  j["warnings"] = s.warnings;
  j["t"] = numbers(s.t);
  j["level_lambdas"] = numbers(s.level_lambdas);
  j["observed_order"] = number(s.observed_order);
  j["iterations"] = s.iterations;
  return j;
}

Json to_json(const ConeBallReport& r) {
  Json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["cone_lambda"] = number(r.cone.lambda);
  j["cone_error_bar"] = number(r.cone.error_bar);
  j["ball_dimension"] = 2 * r.n - 1;
  j["ball_lambda"] = number(r.ball.lambda);
  j["ball_error_bar"] = number(r.ball.error_bar);
  j["ratio"] = number(r.ratio);
  j["expected"] = number(r.expected);
  j["relative_deviation"] = number(r.relative_deviation);
  j["ratio_error_bar"] = number(r.ratio_error_bar);
  return j;
}

Json to_json(const IdentityReport& r) {
  Json j;
  j["n"] = r.n;
  j["t_side"] = number(r.t_side);
  j["bessel_side"] = number(r.bessel_side);
  j["relative_difference"] = number(r.relative_difference);
  j["divergent"] = r.divergent;
  j["truncation"] = number(r.truncation);
  return j;
}

Json to_json(const PartitionCertificate& c) {
  Json checks;
  checks["first_integral_quadrature"] = number(c.cross_checks.first_integral_quadrature);
  checks["integral_quadrature"] = number(c.cross_checks.integral_quadrature);
  checks["level_points"] = c.cross_checks.level_points;
  checks["level_sums"] = numbers(c.cross_checks.level_sums);
  checks["monotone"] = c.cross_checks.monotone;
  Json j;
  j["n"] = c.n;
  j["alpha"] = c.alpha;
  j["j"] = c.j;
  j["partition"] = numbers(c.partition);
  j["first_integral"] = number(c.first_integral);
  j["lower_sum"] = number(c.lower_sum);
  j["verdict"] = c.verdict;
  j["cross_checks"] = checks;
  j["status"] = to_string(c.status);
  return j;
}

Json to_json(const DiniBound& d) {
  Json j;
  j["s"] = d.s;
  j["numerator"] = number(d.numerator);
  j["denominator"] = number(d.denominator);
  j["bound"] = number(d.bound);
  j["error_bar"] = number(d.error_bar);
  j["scaled"] = number(d.scaled);
  return j;
}

Json to_json(const PerturbationReport& r) {
  Json j;
  j["n"] = r.n;
  j["s"] = numbers(r.s_grid);
  j["lambda"] = numbers(r.lambdas);
  j["error_bar"] = numbers(r.error_bars);
  j["dini_bound"] = numbers(r.dini_bounds);
  j["margin"] = numbers(r.margins);
  j["conemin0"] = number(r.conemin0_value);
  j["cone_lambda"] = number(r.cone_lambda);
  return j;
}

Json to_json(const TransformReport& r, const std::string& input_path, const std::string& output_path,
             bool timing) {
  Json j;
  j["transform"] = r.transform;
  j["p"] = r.p;
  j["n"] = r.n;
  j["input"] = input_path;
  j["output"] = output_path;
  j["lambda_before"] = number(r.lambda_before);
  j["error_before"] = number(r.error_before);
  j["lambda_after"] = number(r.lambda_after);
  j["error_after"] = number(r.error_after);
  j["non_decreasing"] = r.non_decreasing();
  j["transversality"] = number(r.transversality);
  j["nodes_before"] = r.input.size();
  j["nodes_after"] = r.output.size();
  if (timing) {
    Json stages = Json::array();
    for (const StageTiming& s : r.stages) stages.push_back({{"stage", s.name}, {"seconds", s.seconds}});
    j["timing"] = stages;
  }
  return j;
}

Json to_json(const OptimizerResult& r) {
  Json restarts = Json::array();
  for (const RestartResult& x : r.restarts) {
    Json e;
    e["restart"] = x.restart;
    e["start"] = x.start;
    e["start_lambda"] = number(x.start_lambda);
    e["lambda"] = number(x.lambda);
    e["length_g"] = number(x.length_g);
    e["evaluations"] = x.evaluations;
    e["feasible"] = x.feasible;
    restarts.push_back(e);
  }
  Json j;
  j["solution"] = to_json(r.solution);
  j["best_restart"] = r.best_restart;
  j["parameters"] = numbers(r.parameters);
  j["length_g"] = number(length_g(r.curve));
  j["restarts"] = restarts;
  j["trace_lines"] = r.trace.size();
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const TraceEntry& e) {
  Json knots = Json::array();
  for (const auto& k : e.knots) knots.push_back(Json::array({k.u, k.r}));
  Json j;
  j["restart"] = e.restart;
  j["iteration"] = e.iteration;
  j["lambda"] = number(e.lambda);
  j["best_so_far"] = number(e.best_so_far);
  j["knots"] = knots;
  return j;
}

Json to_json(const std::vector<BaselineRow>& rows) {
  Json out = Json::array();
  for (const BaselineRow& row : rows)
    out.push_back({{"name", row.name}, {"lambda", number(row.lambda)}, {"error_bar", number(row.error_bar)}});
  return out;
}

Json envelope(const std::string& command, Json config, Json result) {
  Json j;
  j["tool"] = "conelab";
  j["version"] = version();
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

std::string dump(const Json& document) { return document.dump(2) + "\n"; }

}  // namespace conelab
