#pragma once

// Collocation solver for even Maass cusp forms on SL(2,Z).
//
// With W(u) = scaled_K(t, 2 pi u) the unknown coefficients a(n), a(1) = 1,
// satisfy for 1 <= n <= M0
//   a(n) W(nY) = (2/Q) sum_m sqrt(y*_m/Y) sum_k a(k) W(k y*_m) cos(2 pi k x*_m) cos(2 pi n x_m)
// where z_m = x_m + iY, x_m = (m - 1/2)/(2Q), and z*_m is the pullback of z_m.
// Eigenvalues are the t for which this homogeneous system is singular.

#include <string>
#include <utility>
#include <vector>

#include "maasslab/form.hpp"

namespace maasslab {

struct SolverConfig {
  double tMin = 13.5;
  double tMax = 14.0;
  int m0 = 0;           // 0: ceil(2 tMax)
  double y0 = 0.8;      // collocation height, in (0.5, 1)
  double tolerance = 1e-8;
  double gridStep = 1e-3;
};

void validate(const SolverConfig& cfg);

struct ScanPoint {
  double t = 0.0;
  double sigmaMin = 0.0;
};

struct SolveDiagnostics {
  double t = 0.0;
  double sigmaAtRoot = 0.0;
  double medianSigma = 0.0;
  double automorphyResidual = 0.0;
  double heckeResidual4 = 0.0;  // |a(4) - (a(2)^2 - 1)| from the raw solution
  double heckeResidual6 = 0.0;  // |a(6) - a(2) a(3)|
  std::vector<double> rawCoefficients;  // a(1..M0), index 0 unused
};

struct SolvedForm {
  MaassForm form;
  SolveDiagnostics diagnostics;
};

/// Smallest singular value of the column-scaled collocation matrix.
double collocation_sigma_min(double t, const SolverConfig& cfg);

/// Row-one residual with a(1) = 1; changes sign across an eigenvalue.
double collocation_residual(double t, const SolverConfig& cfg);

/// Solution a(1..M0) with a(1) = 1.
std::vector<double> collocation_coefficients(double t, const SolverConfig& cfg);

std::vector<ScanPoint> scan_sigma(const SolverConfig& cfg);

/// Every eigenvalue found in the interval, increasing.
std::vector<SolvedForm> solve_even_forms(const SolverConfig& cfg);

/// The lowest eigenvalue in the interval. SolverError if none.
SolvedForm solve_even_form_detail(const SolverConfig& cfg);
MaassForm solve_even_form(const SolverConfig& cfg);

/// max |phi(-1/z) - phi(z)| over `count` fixed points with |x| <= 1/2 in
/// the annulus 0.8 <= |z| <= 1.25.
double automorphy_residual(const MaassForm& form, int count = 20);

/// Rescaled first coefficient making the Petersson norm one.
double l2_normalizing_rho(double t, const HeckeTable& table);

MaassForm ingest_form(const std::string& path);

}  // namespace maasslab
