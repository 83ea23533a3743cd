#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conelab/cone_analysis.hpp"
#include "conelab/eigensolver.hpp"
#include "conelab/optimizer.hpp"
#include "conelab/perturbation.hpp"
#include "conelab/transformations.hpp"

namespace conelab {

// Field order is insertion order, so identical inputs give identical text.
using Json = nlohmann::ordered_json;

const char* version();

/// A double, or "inf" / "-inf" / "nan" for non-finite values (JSON has no literal for them).
Json number(double value);

/// {lambda, error_bar, p, n, grid_levels, residual, phi, warnings}, then the nodes t,
/// the per-level eigenvalues, the observed order and the solver iteration count.
Json to_json(const EigenSolution& solution);
Json to_json(const ConeBallReport& report);
Json to_json(const IdentityReport& report);
/// {n, alpha, j, partition, first_integral, lower_sum, verdict, cross_checks, status}.
Json to_json(const PartitionCertificate& certificate);
Json to_json(const DiniBound& bound);
Json to_json(const PerturbationReport& report);
/// Curves are referenced by file path. Stage timings vary between runs and are only
/// written when `timing` is set.
Json to_json(const TransformReport& report, const std::string& input_path, const std::string& output_path,
             bool timing = false);
/// Everything but the search trace.
Json to_json(const OptimizerResult& result);
/// One trace line: restart, iteration, lambda, best_so_far and the knots as [u, r] pairs.
Json to_json(const TraceEntry& entry);
Json to_json(const std::vector<BaselineRow>& rows);

/// {tool, version, command, config, result}.
Json envelope(const std::string& command, Json config, Json result);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& document);

}  // namespace conelab
