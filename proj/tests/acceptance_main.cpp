// Acceptance suite driver: one PASS/FAIL line per criterion on stdout,
// timings on stderr. Exit status 0 only when every criterion passes.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "maasslab/acceptance.hpp"

int main(int argc, char** argv) {
  maasslab::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  const auto report = maasslab::run_acceptance(opts, [](const maasslab::CriterionResult& r) {
    std::cout << maasslab::report_line(r) << std::endl;
    std::fprintf(stderr, "  criterion %d took %.1f s (budget %.0f s)\n", r.id, r.seconds,
                 r.budgetSeconds);
  });
  return report.allPass() ? 0 : 1;
}
