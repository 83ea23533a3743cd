#pragma once

#include <string>
#include <vector>

#include "conelab/cone_analysis.hpp"

namespace conelab::reproduce {

struct Check {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::string claim;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // reported values that are not asserted
  double seconds = 0.0;

  bool passed() const;
};

constexpr int kCriterionCount = 9;

std::string criterion_title(int id);

/// Runs acceptance criterion `id` (1..9). Numerical failures inside a check are
/// recorded as a failed check with the error message.
CriterionResult run_criterion(int id);

/// Exit status of `certify`: 4 when an asserted certificate is not Certified, else 0.
int certificate_exit_code(const PartitionCertificate& certificate, CertifyMode mode);

/// One section per criterion with its claim, a table of checks and the notes.
std::string markdown_summary(const std::vector<CriterionResult>& results);

}  // namespace conelab::reproduce
