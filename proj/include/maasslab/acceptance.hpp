#pragma once

// The acceptance suite: eleven numbered criteria, each reported as one
// PASS/FAIL line. The report text is deterministic for a fixed seed; timings
// are only passed to the per-criterion callback.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace maasslab {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  std::vector<int> only;  // empty: all criteria
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budgetSeconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;

  bool allPass() const;
  /// One "PASS|FAIL <id> <name>: <detail>" line per criterion.
  std::string text() const;
};

/// "PASS|FAIL <id> <name>: <detail>"
std::string report_line(const CriterionResult& r);

/// Runs the selected criteria in order, calling onResult after each one.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts,
                                const std::function<void(const CriterionResult&)>& onResult = {});

/// Number of real zeros per period of sum_k a_k cos(k theta) + b_k sin(k theta)
/// (a[0] the constant term, b[0] unused), from the roots of the associated
/// polynomial on the unit circle.
int trig_poly_zero_count(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace maasslab
