#pragma once

#include <string>
#include <vector>

namespace ipme {

struct CaseResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Names accepted by run_suites: operators, exact, comparison, scaling, io.
const std::vector<std::string>& suite_names();

/// Runs the named suites (all when empty). With inject_fault the mixed
/// second differences change sign for the duration of the call.
std::vector<CaseResult> run_suites(const std::vector<std::string>& suites, bool inject_fault = false);

std::vector<CaseResult> verify_operators();
std::vector<CaseResult> verify_exact();
std::vector<CaseResult> verify_comparison();
std::vector<CaseResult> verify_scaling();
std::vector<CaseResult> verify_io();

}  // namespace ipme
