#pragma once

// Exponentially rescaled MacDonald-Bessel kernel e^{pi r/2} K_{ir}(u).
//
// Three evaluation routes:
//   * Debye-type asymptotic series away from the turning point u = r,
//   * a contour-shifted integral (the oracle) that is accurate everywhere
//     for r <= kOracleMaxOrder,
//   * scaled_K, which dispatches between the two.

#include <limits>
#include <string>

namespace maasslab {

inline constexpr double kRegimeCutoff = 3.0;
inline constexpr double kOracleMaxOrder = 250.0;
// Global constant A in |e^{pi r/2} K_{ir}(u)| <= A r^{-1/3} on the transition zone.
inline constexpr double kTransitionBoundConstant = 2.5;
inline constexpr int kDefaultAsymptoticTerms = 4;
inline constexpr int kMaxAsymptoticTerms = 7;

enum class Regime { oscillatory, transition, exponential };

std::string to_string(Regime r);

struct BesselRegime {
  Regime tag = Regime::transition;
  double cutoffConstant = kRegimeCutoff;
};

struct BesselEvaluation {
  double value = 0.0;
  BesselRegime regime;
  double errorEstimate = 0.0;
  int termsUsed = 0;  // 0 when the quadrature route was taken
};

/// H(xi) = arccosh(1/xi) - sqrt(1-xi^2) for xi <= 1, sqrt(xi^2-1) - arcsec(xi) beyond.
/// Evaluated as atanh(s)-s / s-atan(s) with s = sqrt|1-xi^2| so that the
/// cubic zero at xi = 1 keeps full relative accuracy.
double phase_H(double xi);

/// dH/dxi.
double phase_H_derivative(double xi);

BesselRegime classify_regime(double r, double u, double C = kRegimeCutoff);

/// Debye expansion with `terms` terms (terms = 1 is the leading order).
/// errorEstimate is the modulus of the first omitted term. Throws DomainError
/// for transition-zone input or r*H(u/r) <= 1.
BesselEvaluation scaled_K_asymptotic(double r, double u, int terms = kDefaultAsymptoticTerms,
                                     double C = kRegimeCutoff);

struct OracleResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Quadrature of K_{ir}(u) = Re int_0^inf exp(-u cosh(s+i theta) + i r (s+i theta)) ds
/// on a horizontal contour through (or just below) the saddle points.
/// Throws DomainError for u <= 0, r < 0 or r > kOracleMaxOrder, and
/// AccuracyError when refinement stalls.
OracleResult scaled_K_oracle_detail(double r, double u);
double scaled_K_oracle(double r, double u);

/// Regime dispatch. The asymptotic series is used outside the transition
/// zone unless its error estimate exceeds `absTol`, in which case the
/// oracle is used (when r allows it).
BesselEvaluation scaled_K(double r, double u,
                          double absTol = std::numeric_limits<double>::infinity());

/// Upper bound for |e^{pi r/2} K_{ir}(u)| from the three-regime estimates
/// (amplitude factors padded by 10%). Meant for truncation and tail bounds.
double scaled_K_majorant(double r, double u);

}  // namespace maasslab
