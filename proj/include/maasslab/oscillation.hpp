#pragma once

// Sign changes of Maass forms along horocycles and vertical segments, and the
// quantitative Littlewood criterion that bounds them from below.

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "maasslab/form.hpp"

namespace maasslab {

struct SegmentFunction {
  std::string kind = "custom";  // horocycle, vertical, axis, custom
  std::function<double(double)> f;
  double a = 0.0;
  double b = 1.0;
  bool periodic = false;         // f has period b - a
  int resolutionHint = 0;        // minimum number of samples
  double oscillationScale = 0.0; // expected zero spacing, 0 if unknown
  // f may be evaluated on [a, domainEnd]; periodic segments extend freely.
  double domainEnd = std::numeric_limits<double>::infinity();
};

SegmentFunction custom_segment(std::function<double(double)> f, double a, double b,
                               bool periodic = false, int resolutionHint = 0);

/// psi_y(x) = Phi(x + iy) on x in [-1/2, 1/2).
SegmentFunction horocycle_segment(const MaassForm& form, double y);
/// phi_x(y) = Phi(x + iy) on y in [a, a + h]; evaluable up to a + 2h.
SegmentFunction vertical_segment(const MaassForm& form, double x, double a, double h);
/// vertical_segment with x = 0 (the imaginary axis).
SegmentFunction axis_segment(const MaassForm& form, double a, double h);

/// ((b-a)^{-1} int_a^b |f|^lambda)^{1/lambda}
double M_lambda(const SegmentFunction& f, double lambda);

/// (b-a)^{-1} int_a^b | int_0^eta f(y+v) dv | dy
double J_functional(const SegmentFunction& f, double eta);

/// Sign changes along the segment, skipping exact zeros. Periodic segments
/// are counted cyclically. Sampling doubles until two successive counts agree.
long long count_sign_changes(const SegmentFunction& f);

// ---------------------------------------------------------------------------

inline constexpr double kLittlewoodNFactor = 1e7;
inline constexpr double kRelaxedNFactor = 1e2;

struct LittlewoodCertificate {
  double a = 0.0, b = 0.0;
  double eta = 0.0, omega = 0.0, N = 0.0, c = 0.0;
  double M1 = 0.0, M2 = 0.0, J = 0.0, gBound = 0.0;
  bool premisesHold = false;
  long long lowerBound = 0;
  std::string failedPremises;  // comma separated, empty when all hold
  // Same test with N > 10^2 (omega + 7). Not a certificate.
  bool relaxedPremisesHold = false;
  long long relaxedLowerBound = 0;
};

/// Premise check and conclusion from precomputed quantities.
LittlewoodCertificate littlewood_from_values(double a, double b, double c, double omega, double N,
                                             double M1, double M2, double J, double gBound);

/// Computes M1, M2 of f, J of f1 = f - g M2(f), and sup |g| by sampling.
LittlewoodCertificate littlewood_certify(const SegmentFunction& f,
                                         const std::function<double(double)>& g, double c,
                                         double omega, double N);

// ---------------------------------------------------------------------------
// Dirichlet polynomial L_x(s) = sum_{1<=n<=T} lambda(n) e(nx) n^{-s}.
// `lambda` is indexed by n (entry 0 unused).

std::complex<double> dirichlet_poly(std::span<const double> lambda, double T, double x,
                                    std::complex<double> s);
std::complex<double> dirichlet_poly(const MaassForm& form, double x, std::complex<double> s);

struct JPair {
  double J1 = 0.0;
  double J2 = 0.0;
};

JPair J1_J2(std::span<const double> lambda, double tPhi, double x, double delta);
JPair J1_J2(const MaassForm& form, double x, double delta);

struct JPsiBound {
  double J1 = 0.0, J2 = 0.0, J3 = 0.0, J4 = 0.0;
  double total() const { return J1 + J2 + J3 + J4; }
};

JPsiBound J_psi_bound(const MaassForm& form, double y, double eta);

// ---------------------------------------------------------------------------

struct PhaseQuadruple {
  int n1 = 1, n2 = 1, n3 = 1, n4 = 1;
  double t = 1.0;
};

/// Checks n1 + n2 = n3 + n4, n1 not in {n3, n4}, all positive.
void validate(const PhaseQuadruple& q);

double phase_D(const PhaseQuadruple& q, double y);
double phase_d(const PhaseQuadruple& q, double y);
double phase_dprime(const PhaseQuadruple& q, double y);

/// Constant in |d| >= kappa y |n1 n2 - n3 n4| / t, valid while every
/// 2 pi n_j y <= t - t^{1-eps}; follows from h_j <= t.
inline constexpr double kPhaseKappa = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;

// ---------------------------------------------------------------------------

struct GoodHeight {
  int k = 0;
  double Y = 0.0;
};

struct HeightSelection {
  int windows = 0;
  std::vector<GoodHeight> successes;
  int failures() const { return windows - static_cast<int>(successes.size()); }
  double successFraction() const {
    return windows ? static_cast<double>(successes.size()) / windows : 0.0;
  }
};

inline constexpr int kHeightSearchSamples = 16;

/// Splits [a, a+1) into ceil(t^{1-eps}) windows and looks in each for Y with
/// t^{eps1/10} + int psi_Y^4 dx <= M (int psi_Y^2 dx)^2.
HeightSelection select_good_heights(const MaassForm& form, double a, double eps, double eps1,
                                    double M);

struct SignCertificateParams {
  double eps = 0.5;
  double eps1 = 0.01;
  double omega = 0.0;  // 0: t^{4 eps1}, t^{8 eps1}, t^{11 eps1} by segment kind
  double N = 0.0;      // 0: t
  bool assumeLindelof = false;
};

struct SignCertificate {
  LittlewoodCertificate certificate;
  long long directCount = 0;
};

SignCertificate certify_sign_changes(const MaassForm& form, const SegmentFunction& seg,
                                     const SignCertificateParams& params);

}  // namespace maasslab
