// Acceptance suite: one PASS/FAIL line per criterion with the default configuration.

#include "extremalflow/acceptance.hpp"

#include <iostream>

int main() {
  const extremalflow::RunConfig cfg;
  const auto results = extremalflow::run_acceptance(cfg, {}, &std::cerr);
  extremalflow::print_results(std::cout, results);
  return extremalflow::all_passed(results) ? 0 : 1;
}
