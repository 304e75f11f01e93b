#pragma once

#include <functional>
#include <string>
#include <vector>

#include "maasslab/form.hpp"

namespace maasslab {

// ---------------------------------------------------------------------------
// Quadrature over the standard fundamental domain |x| <= 1/2, |z| >= 1 with
// the hyperbolic measure dx dy / y^2.

struct Slice {
  std::function<double(double)> f;  // x -> integrand at the slice height
  int bandwidth = 0;                // highest frequency in x, for node counts
};
using SliceFactory = std::function<Slice(double y)>;

struct DomainQuadrature {
  int quadOrder = 32;
  double yMax = 10.0;
  bool infiniteTail = false;  // also integrate y > yMax (via w = 1/y)
  double panelTol = 1e-9;
  int panelsPerUnit = 8;
};

struct DomainIntegral {
  double value = 0.0;
  double lower = 0.0;  // sqrt(3)/2 <= y <= 1
  double upper = 0.0;  // 1 <= y <= yMax
  double tail = 0.0;   // y > yMax, when requested
  double error = 0.0;
};

DomainIntegral integrate_fundamental_domain(const SliceFactory& slices,
                                            const DomainQuadrature& opts = {});

// ---------------------------------------------------------------------------

inline constexpr double kParsevalEps = 0.05;
inline constexpr double kParsevalConstant = 10.0;

struct HorocycleParseval {
  double y = 0.0;
  double mainTerm = 0.0;
  double errorBudget = 0.0;
  double Delta = 0.0;
  int windowEnd = 0;        // last n in the main-term window
  bool outOfRange = false;  // y > t/(2 pi): empty sum
};

struct HorocycleDirect {
  double value = 0.0;
  double parseval = 0.0;  // 2 sum lambda(n)^2 Kt(2 pi n y)^2
  int truncation = 0;
  bool underResolved = false;
};

/// Periodic trapezoid of Phi(x+iy)^2 over one period with gridSize points.
HorocycleDirect horocycle_l2_direct(const MaassForm& form, double y, int gridSize);

HorocycleParseval horocycle_l2_mainterm(const MaassForm& form, double y, double eps = kParsevalEps);

struct NormResult {
  double value = 0.0;      // integral of |phi|^p over the truncated domain
  double tailBound = 0.0;  // bound on the part above yMax
  double error = 0.0;      // quadrature error estimate
};

/// Integral of |phi|^p dx dy / y^2 over the fundamental domain cut at yMax.
NormResult lp_integral(const MaassForm& form, double p, double yMax = 10.0, int quadOrder = 32);

/// l4_norm = integral of phi^4.
NormResult l4_norm(const MaassForm& form, double yMax = 10.0, int quadOrder = 32);

/// (integral of |phi|^p)^{1/p}.
double lp_norm(const MaassForm& form, double p, double yMax = 10.0, int quadOrder = 32);

/// Integral of phi(iy)^2 dy / y over [a, b].
double geodesic_l2(const MaassForm& form, double a, double b);

// ---------------------------------------------------------------------------
// Splitting of psi(z) = sum_{1<=n<t} lambda(n) e(nx) Kt(2 pi n y) by the size
// of 2 pi n y relative to t.

struct RangePiece {
  std::string label;  // psi0, psi1l, psi1eps, psi21, psi22, psi3
  int l = 0;          // for psi1l
  double uLo = 0.0;   // window lo <= 2 pi n y < hi
  double uHi = 0.0;
  double contributionL4 = 0.0;
};

int l_epsilon(double eps);

/// Windows (without contributions) in the order psi0, psi1l..., psi1eps,
/// psi21, psi22, psi3. psi22 is psi2 minus psi21 and so covers two intervals;
/// its uLo/uHi are those of psi2.
std::vector<RangePiece> range_windows(double t, double eps);

/// Label of the piece containing n at height y.
std::string piece_of(double t, double eps, int n, double y);

/// Value of one piece at z (complex sum; returns real and imaginary parts).
std::pair<double, double> piece_value(const MaassForm& form, double eps, const std::string& label,
                                      int l, Point z);

std::vector<RangePiece> range_decomposition(const MaassForm& form, double eps, double yMax = 10.0);

/// Bound on |phi| above height y from the kernel majorant.
double phi_sup_bound(const MaassForm& form, double y);

}  // namespace maasslab
