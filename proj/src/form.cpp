#include "maasslab/form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maasslab/errors.hpp"
#include "maasslab/special.hpp"

namespace maasslab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<int> primes_up_to(int n) {
  std::vector<int> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (int p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (long long q = 1LL * p * p; q <= n; q += p) composite[q] = true;
  }
  return out;
}

int divisor_count(int n) {
  int count = 1;
  for (int p = 2; 1LL * p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (n > 1) count *= 2;
  return count;
}

double coefficient_bound(int n) {
  return divisor_count(n) * std::pow(static_cast<double>(n), kKimSarnakTheta + 0.01);
}

HeckeTable::HeckeTable(std::map<int, double> primes, int extent)
    : primes_(std::move(primes)), extent_(extent) {
  if (extent_ < 1) throw DomainError("hecke_extend: N_max must be positive");
  for (int p : primes_up_to(extent_)) {
    if (!primes_.count(p)) {
      throw DomainError("hecke_extend: missing eigenvalue for prime " + std::to_string(p));
    }
  }
  values_.assign(extent_ + 1, 0.0);
  values_[1] = 1.0;
  // Smallest prime factor sieve, then lambda(n) = lambda(p^k) lambda(m) with p^k || n.
  std::vector<int> spf(extent_ + 1, 0);
  for (int i = 2; i <= extent_; ++i) {
    if (spf[i]) continue;
    for (int j = i; j <= extent_; j += i) {
      if (!spf[j]) spf[j] = i;
    }
  }
  for (int n = 2; n <= extent_; ++n) {
    const int p = spf[n];
    int m = n, pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m > 1) {
      values_[n] = values_[pk] * values_[m];
    } else if (pk == p) {
      values_[n] = primes_.at(p);
    } else {
      values_[n] = primes_.at(p) * values_[pk / p] - values_[pk / (p * p)];
    }
  }
  for (int n = 1; n <= extent_; ++n) {
    if (std::abs(values_[n]) > coefficient_bound(n)) {
      softViolation_ = n;
      break;
    }
  }
}

double HeckeTable::operator()(int n) const {
  if (n < 1) throw DomainError("HeckeTable: index must be positive");
  if (n > extent_) {
    throw TableExtentError("HeckeTable: lambda(" + std::to_string(n) + ") beyond table extent " +
                           std::to_string(extent_));
  }
  return values_[n];
}

HeckeTable hecke_extend(const std::map<int, double>& primeEigenvalues, int nMax) {
  return HeckeTable(primeEigenvalues, nMax);
}

bool MaassForm::rhoWindowFlag() const {
  return rhoOne < 1.0 / std::sqrt(t) || rhoOne > std::sqrt(t);
}

MaassForm make_form(double t, const std::map<int, double>& primes, double rhoOne,
                    const std::string& parity, int nMax) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("form: t must be positive");
  if (!(rhoOne > 0.0) || !std::isfinite(rhoOne)) throw DomainError("form: rho1 must be positive");
  if (parity != "even") throw DomainError("form: only even forms are supported (got '" + parity + "')");
  if (nMax <= 0) nMax = static_cast<int>(std::ceil(t)) + kTableMargin;
  MaassForm f;
  f.t = t;
  f.parity = parity;
  f.rhoOne = rhoOne;
  f.hecke = hecke_extend(primes, nMax);
  return f;
}

int truncation_length(const MaassForm& form, double y, double tol) {
  if (!(y > 0.0)) throw DomainError("truncation_length: y must be positive");
  if (!(tol > 0.0)) throw DomainError("truncation_length: tol must be positive");
  const double t = form.t;
  const double edge = t + kRegimeCutoff * std::cbrt(t);
  std::vector<double> terms{0.0};
  for (int n = 1;; ++n) {
    const double u = kTwoPi * n * y;
    const double b = (n <= form.hecke.extent()) ? std::abs(form.hecke.values()[n]) : coefficient_bound(n);
    const double term = b * scaled_K_majorant(t, u);
    terms.push_back(term);
    // Past the turning point the majorant decays faster than geometrically.
    if (u > edge && term < 1e-6 * tol) break;
    if (n > 10'000'000) throw DomainError("truncation_length: y too small");
  }
  double tail = 0.0;
  int N = static_cast<int>(terms.size()) - 1;
  while (N > 1 && tail + terms[N] < tol) {
    tail += terms[N];
    --N;
  }
  return std::max(N, 1);
}

KernelRow kernel_row(const MaassForm& form, double y, int N, double besselTol) {
  if (!(y > 0.0)) throw DomainError("kernel_row: y must be positive");
  if (N > form.hecke.extent()) {
    throw TableExtentError("evaluation at y=" + std::to_string(y) + " needs " + std::to_string(N) +
                           " coefficients; table has " + std::to_string(form.hecke.extent()));
  }
  KernelRow row;
  row.y = y;
  row.coeff.assign(N + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    const double lam = form.hecke.values()[n];
    const double tolN = besselTol / std::max(1.0, std::abs(lam));
    const BesselEvaluation k = scaled_K(form.t, kTwoPi * n * y, tolN);
    row.coeff[n] = lam * k.value;
    row.besselError += std::abs(lam) * k.errorEstimate;
  }
  return row;
}

KernelRow kernel_row(const MaassForm& form, double y, double tol) {
  const int N = truncation_length(form, y, tol);
  return kernel_row(form, y, N, tol / N);
}

double cosine_series(const KernelRow& row, double x) {
  // Clenshaw recurrence for sum c_n cos(n theta).
  const double theta = kTwoPi * (x - std::round(x));
  const double c2 = 2.0 * std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t n = row.coeff.size() - 1; n >= 1; --n) {
    const double b0 = row.coeff[n] + c2 * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  // sum_{n>=1} c_n cos(n theta) = b1 cos(theta) - b2
  return 2.0 * (b1 * std::cos(theta) - b2);
}

double evaluate_Phi(const MaassForm& form, Point z, double tol) {
  if (!(z.y > 0.0)) throw DomainError("evaluate_Phi: y must be positive");
  if (!(tol > 0.0)) throw DomainError("evaluate_Phi: tol must be positive");
  // Phi carries a factor 2 from the +-n pairing.
  return cosine_series(kernel_row(form, z.y, 0.5 * tol), z.x);
}

double evaluate_phi(const MaassForm& form, Point z, double tol) {
  if (!(z.y > 0.0)) throw DomainError("evaluate_phi: y must be positive");
  if (!(tol > 0.0)) throw DomainError("evaluate_phi: tol must be positive");
  const double scale = form.rhoOne * std::sqrt(z.y);
  return scale * evaluate_Phi(form, z, tol / std::max(1.0, scale));
}

CoefficientMass coefficient_mass(const MaassForm& form, double omega) {
  if (!(omega > 0.0)) throw DomainError("coefficient_mass: omega must be positive");
  const double hi = omega * form.t;
  const double lo = 1e-5 * hi;
  const int nLo = std::max(1, static_cast<int>(std::ceil(lo)));
  const int nHi = static_cast<int>(std::floor(hi));
  CoefficientMass out;
  if (nHi < nLo) {
    out.vacuous = true;
    return out;
  }
  if (nHi > form.hecke.extent()) {
    throw TableExtentError("coefficient_mass: window reaches n=" + std::to_string(nHi) +
                           " beyond table extent " + std::to_string(form.hecke.extent()));
  }
  double s = 0.0;
  for (int n = nLo; n <= nHi; ++n) {
    const double c = form.rhoOne * form.hecke.values()[n];
    s += c * c;
  }
  out.value = 2.0 * s;
  return out;
}

Point pullback(Point z) {
  if (!(z.y > 0.0)) throw DomainError("pullback: y must be positive");
  for (int iter = 0; iter < 1000; ++iter) {
    z.x -= std::round(z.x);
    const double r2 = z.x * z.x + z.y * z.y;
    if (r2 >= 1.0 - 1e-15) return z;
    z = {-z.x / r2, z.y / r2};
  }
  return z;
}

}  // namespace maasslab
