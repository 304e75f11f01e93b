#pragma once

// Nodal domains of phi on rectangles, counted on sign grids.

#include <functional>
#include <string>
#include <vector>

#include "maasslab/form.hpp"
#include "maasslab/oscillation.hpp"

namespace maasslab {

/// Bogomolny-Schmit percolation constant (2/pi)(3 sqrt 3 - 5).
inline constexpr double kBsTarget = 0.12487451069284568;
inline constexpr double kCourantSlack = 0.5;
inline constexpr double kZeroThreshold = 1e-3;  // relative to the row RMS

struct Rect {
  double x0 = -0.5, x1 = 0.5, y0 = 1.0, y1 = 2.0;
};

void validate(const Rect& r);

struct SignGrid {
  Rect rect;
  int nx = 0;
  int ny = 0;
  std::vector<signed char> signs;  // row-major, signs[j * nx + i] at cell centre (x_i, y_j)

  int at(int i, int j) const { return signs[static_cast<std::size_t>(j) * nx + i]; }
  double x(int i) const { return rect.x0 + (i + 0.5) * (rect.x1 - rect.x0) / nx; }
  double y(int j) const { return rect.y0 + (j + 0.5) * (rect.y1 - rect.y0) / ny; }
};

/// Finest local wavelength 2 pi y0 / t on the rectangle.
double oscillation_scale(const MaassForm& form, const Rect& rect);

/// Signs of phi at cell centres. Throws DomainError when the spacing exceeds
/// oscillation_scale / 10.
SignGrid sample_grid(const MaassForm& form, const Rect& rect, int nx, int ny);

/// Signs of an arbitrary field; values with |f| <= zeroTol count as 0.
SignGrid sample_grid(const std::function<double(double, double)>& f, const Rect& rect, int nx,
                     int ny, double zeroTol = 0.0);

/// 4-connected same-sign components; zero cells belong to none.
int count_components(const SignGrid& grid);

/// Reflection loci: x = 0, x = 1/2, and the arc |z| = 1 (angle in (pi/2, 2pi/3]).
enum class Locus { delta1, delta2, delta3 };

Locus parse_locus(const std::string& name);
std::string to_string(Locus l);

/// Restriction of phi to the locus over [lo, hi] (heights for delta1/delta2,
/// angles for delta3).
SegmentFunction locus_segment(const MaassForm& form, Locus locus, double lo, double hi);

/// 1 + ceil(K/2) with K the sign changes of the restriction.
int inert_lower_bound(const SegmentFunction& restriction);
int inert_lower_bound(const MaassForm& form, Locus locus, double lo, double hi);

struct NodalReport {
  Rect rect;
  int nx = 0, ny = 0;
  int componentCount = 0;
  int inertLowerBound = 0;  // 0 when the rectangle meets no locus
  std::string inertLocus;
  double courantBudget = 0.0;  // k = lambda / 24
  double bsRatio = 0.0;        // componentCount / k
  double bsTarget = kBsTarget;
  bool courantOk = true;       // componentCount <= (1 + slack) k
};

/// `resolution` samples per finest local wavelength (at least 10).
NodalReport nodal_report(const MaassForm& form, const Rect& rect, int resolution = 20);

/// The sign grid used by nodal_report at the same resolution.
SignGrid report_grid(const MaassForm& form, const Rect& rect, int resolution = 20);

}  // namespace maasslab
