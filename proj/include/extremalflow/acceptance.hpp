#pragma once

// Acceptance checks 1-10, shared by `extremalflow verify` and the test suite.

#include "extremalflow/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace extremalflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the selected criteria (all when `only` is empty) with the problem,
/// stepping and tolerance settings of `cfg`. Progress lines go to `log` if
/// non-null. Criteria 7 and 8 reuse the runs of criteria 4-6.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const std::vector<int>& only = {},
                                            std::ostream* log = nullptr);

/// One "[PASS]/[FAIL] n. name: detail" line per criterion.
void print_results(std::ostream& os, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace extremalflow
