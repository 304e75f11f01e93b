#pragma once

#include <functional>
#include <span>
#include <vector>

namespace maasslab {

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

struct AdaptiveOptions {
  double absTol = 1e-12;
  double relTol = 1e-12;
  int maxPanels = 20000;
  // Panels narrower than this are never split further.
  double minWidth = 0.0;
};

/// Globally adaptive Gauss-Kronrod (10/21) quadrature.
///
/// The interval is first split at `breakpoints` (sorted, inside (a,b)) and
/// then into `initialPanels` equal pieces per sub-interval; the panel with
/// the largest error estimate is bisected until the total estimate falls
/// below max(absTol, relTol*|value|). Panel values are summed in position
/// order with compensation, so the result does not depend on the order in
/// which panels were refined. Throws AccuracyError when maxPanels is hit
/// before the tolerance.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const AdaptiveOptions& opts = {},
                              std::span<const double> breakpoints = {}, int initialPanels = 1);

/// Same as integrate_adaptive but never throws; the caller inspects .error.
QuadResult integrate_adaptive_nothrow(const std::function<double(double)>& f, double a,
                                      double b, const AdaptiveOptions& opts = {},
                                      std::span<const double> breakpoints = {},
                                      int initialPanels = 1);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, cached per n. Thread-safe.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre: `panels` equal panels with an n-point rule each.
double integrate_gauss(const std::function<double(double)>& f, double a, double b, int n,
                       int panels = 1);

// Trapezoid rule on a full period [a, a+period) with `points` samples.
double integrate_periodic(const std::function<double(double)>& f, double a, double period,
                          int points);

}  // namespace maasslab
