#pragma once

// Even Hecke-Maass cusp forms for SL(2,Z):
//   phi(z) = 2 sqrt(y) rho1 sum_{n>=1} lambda(n) Kt(2 pi n y) cos(2 pi n x)
// with Kt the rescaled kernel scaled_K(t, .).

#include <map>
#include <string>
#include <vector>

namespace maasslab {

inline constexpr double kKimSarnakTheta = 7.0 / 64.0;
inline constexpr int kTableMargin = 64;

struct Point {
  double x = 0.0;
  double y = 1.0;
};

class HeckeTable {
 public:
  HeckeTable() = default;
  HeckeTable(std::map<int, double> primes, int extent);

  const std::map<int, double>& primeEigenvalues() const { return primes_; }
  int extent() const { return extent_; }
  /// lambda(n) for 1 <= n <= extent; TableExtentError beyond.
  double operator()(int n) const;
  const std::vector<double>& values() const { return values_; }  // values()[n], index 0 unused

  /// First n violating |lambda(n)| <= d(n) n^{7/64+0.01}, or 0 if none.
  int softBoundViolation() const { return softViolation_; }

 private:
  std::map<int, double> primes_;
  int extent_ = 0;
  std::vector<double> values_;
  int softViolation_ = 0;
};

HeckeTable hecke_extend(const std::map<int, double>& primeEigenvalues, int nMax);

std::vector<int> primes_up_to(int n);
int divisor_count(int n);

struct MaassForm {
  double t = 0.0;
  std::string parity = "even";
  HeckeTable hecke;
  double rhoOne = 1.0;

  double eigenvalue() const { return 0.25 + t * t; }
  double weylIndex() const { return eigenvalue() / 24.0; }
  bool softBoundFlag() const { return hecke.softBoundViolation() != 0; }
  /// rhoOne outside [t^{-1/2}, t^{1/2}].
  bool rhoWindowFlag() const;
};

/// Checks t > 0, rhoOne > 0, parity, and extends the prime table to
/// nMax (default ceil(t) + kTableMargin).
MaassForm make_form(double t, const std::map<int, double>& primes, double rhoOne,
                    const std::string& parity = "even", int nMax = 0);

/// Bound on |lambda(n)| used for tails where the table is not consulted.
double coefficient_bound(int n);

/// Smallest N >= 1 with sum_{n>N} |lambda(n)| Kmajorant(t, 2 pi n y) < tol.
int truncation_length(const MaassForm& form, double y, double tol);

/// Terms lambda(n) Kt(2 pi n y), n = 1..N (index 0 unused), for a fixed height.
struct KernelRow {
  double y = 0.0;
  std::vector<double> coeff;
  double besselError = 0.0;  // sum |lambda(n)| errorEstimate_n
};

KernelRow kernel_row(const MaassForm& form, double y, double tol);
KernelRow kernel_row(const MaassForm& form, double y, int N, double besselTol);

/// sum_{n>=1} coeff[n] cos(2 pi n x), times 2.
double cosine_series(const KernelRow& row, double x);

double evaluate_Phi(const MaassForm& form, Point z, double tol = 1e-12);
double evaluate_phi(const MaassForm& form, Point z, double tol = 1e-12);

struct CoefficientMass {
  double value = 0.0;
  bool vacuous = false;  // no integer in the window
};

/// 2 sum_{1e-5 omega t <= n <= omega t} (rhoOne lambda(n))^2
CoefficientMass coefficient_mass(const MaassForm& form, double omega);

/// Reduce z to the standard fundamental domain |x| <= 1/2, |z| >= 1.
Point pullback(Point z);

}  // namespace maasslab
