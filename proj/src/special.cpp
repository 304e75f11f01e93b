#include "maasslab/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "maasslab/errors.hpp"
#include "maasslab/quadrature.hpp"

namespace maasslab {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Debye polynomials u_k(p) from
//   u_{k+1}(p) = p^2 (1-p^2) u_k'(p) / 2 + (1/8) int_0^p (1 - 5 t^2) u_k(t) dt.
const std::vector<std::vector<double>>& debye_polynomials() {
  static const std::vector<std::vector<double>> polys = [] {
    std::vector<std::vector<double>> u{{1.0}};
    for (int k = 0; k + 1 < kMaxAsymptoticTerms + 1; ++k) {
      const auto& c = u.back();
      std::vector<double> next(c.size() + 3, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        const double jd = static_cast<double>(j);
        if (j > 0) {
          next[j + 1] += 0.5 * jd * c[j];
          next[j + 3] -= 0.5 * jd * c[j];
        }
        next[j + 1] += c[j] / (8.0 * (jd + 1.0));
        next[j + 3] -= 5.0 * c[j] / (8.0 * (jd + 3.0));
      }
      u.push_back(std::move(next));
    }
    return u;
  }();
  return polys;
}

cplx eval_poly(const std::vector<double>& c, cplx p) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * p + *it;
  return acc;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::oscillatory:
      return "oscillatory";
    case Regime::transition:
      return "transition";
    case Regime::exponential:
      return "exponential";
  }
  return "unknown";
}

double phase_H(double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("phase_H: xi must be positive");
  if (xi == 1.0) return 0.0;
  if (xi < 1.0) {
    const double s = std::sqrt((1.0 - xi) * (1.0 + xi));
    if (s < 1e-2) {
      // atanh(s) - s = s^3/3 + s^5/5 + ...
      double term = s * s * s, acc = 0.0;
      for (int k = 3; k < 40; k += 2) {
        acc += term / k;
        term *= s * s;
      }
      return acc;
    }
    return std::atanh(s) - s;
  }
  const double s = std::sqrt((xi - 1.0) * (xi + 1.0));
  if (s < 1e-2) {
    // s - atan(s) = s^3/3 - s^5/5 + ...
    double term = s * s * s, acc = 0.0, sign = 1.0;
    for (int k = 3; k < 40; k += 2) {
      acc += sign * term / k;
      term *= s * s;
      sign = -sign;
    }
    return acc;
  }
  return s - std::atan(s);
}

double phase_H_derivative(double xi) {
  if (!(xi > 0.0)) throw DomainError("phase_H_derivative: xi must be positive");
  if (xi <= 1.0) return -std::sqrt((1.0 - xi) * (1.0 + xi)) / xi;
  return std::sqrt((xi - 1.0) * (xi + 1.0)) / xi;
}

BesselRegime classify_regime(double r, double u, double C) {
  const double w = C * std::cbrt(r);
  if (u < r - w) return {Regime::oscillatory, C};
  if (u > r + w) return {Regime::exponential, C};
  return {Regime::transition, C};
}

BesselEvaluation scaled_K_asymptotic(double r, double u, int terms, double C) {
  if (!(r > 0.0) || !(u > 0.0)) throw DomainError("scaled_K_asymptotic: r and u must be positive");
  if (terms < 1 || terms > kMaxAsymptoticTerms) {
    throw DomainError("scaled_K_asymptotic: terms must lie in [1, " +
                      std::to_string(kMaxAsymptoticTerms) + "]");
  }
  const BesselRegime regime = classify_regime(r, u, C);
  if (regime.tag == Regime::transition) {
    throw DomainError("scaled_K_asymptotic: transition-zone input (|u-r| <= C r^{1/3})");
  }
  const double rH = r * phase_H(u / r);
  if (!(rH > 1.0)) throw DomainError("scaled_K_asymptotic: requires r H(u/r) > 1");

  const auto& polys = debye_polynomials();
  const cplx nu(0.0, r);
  BesselEvaluation out;
  out.regime = regime;
  out.termsUsed = terms;

  if (regime.tag == Regime::oscillatory) {
    const double root = std::sqrt((r - u) * (r + u));
    const cplx p(r / root, 0.0);
    const double amplitude = std::sqrt(2.0 * kPi / root);
    cplx series = 0.0, nuPow = 1.0;
    double sign = 1.0;
    for (int k = 0; k < terms; ++k) {
      series += sign * eval_poly(polys[k], p) / nuPow;
      nuPow *= nu;
      sign = -sign;
    }
    const cplx phase = std::polar(1.0, rH - 0.25 * kPi);
    out.value = amplitude * (phase * series).real();
    out.errorEstimate = amplitude * std::abs(eval_poly(polys[terms], p) / nuPow);
    return out;
  }

  const double root = std::sqrt((u - r) * (u + r));
  const cplx p(0.0, r / root);
  const double amplitude = std::sqrt(0.5 * kPi / root) * std::exp(-rH);
  cplx series = 0.0, nuPow = 1.0;
  double sign = 1.0;
  for (int k = 0; k < terms; ++k) {
    series += sign * eval_poly(polys[k], p) / nuPow;
    nuPow *= nu;
    sign = -sign;
  }
  out.value = amplitude * series.real();
  out.errorEstimate = amplitude * std::abs(eval_poly(polys[terms], p) / nuPow);
  return out;
}

OracleResult scaled_K_oracle_detail(double r, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("scaled_K_oracle: u must be positive");
  if (!(r >= 0.0) || r > kOracleMaxOrder) {
    throw DomainError("scaled_K_oracle: r must lie in [0, " + std::to_string(kOracleMaxOrder) +
                      "]");
  }

  // Contour height: through the saddle i*asin(r/u) when u >= r, otherwise just
  // below the line Im s = pi/2 carrying both saddles. Staying 1/r below pi/2
  // costs at most a factor e in cancellation and buys decay of the integrand.
  double theta = (u >= r) ? std::asin(r / u) : 0.5 * kPi;
  const double gap = (r > 0.0) ? std::min(0.5 * kPi, 1.0 / r) : 0.5 * kPi;
  theta = std::min(theta, 0.5 * kPi - gap);
  theta = std::max(theta, 0.0);

  const double ct = std::cos(theta), st = std::sin(theta);
  const double decay = u * ct;
  const double shift = r * (0.5 * kPi - theta);
  const double peakExponent = shift - decay;
  if (peakExponent < -740.0) return {0.0, 0.0, 0};

  // Beyond s_max the integrand is below e^{-40} times its value at s = 0.
  const double sMax = std::acosh(1.0 + 40.0 / decay);
  const double phaseVariation = r * sMax + u * st * std::sinh(sMax);
  const int initial = static_cast<int>(std::clamp(std::ceil(phaseVariation / kPi), 1.0, 50000.0));

  auto integrand = [=](double s) {
    const double ch = std::cosh(s);
    const double mag = std::exp(peakExponent - decay * (ch - 1.0));
    if (mag == 0.0) return 0.0;
    return mag * std::cos(r * s - u * st * std::sinh(s));
  };

  const double scale = std::exp(peakExponent);
  AdaptiveOptions opts;
  // G10/K21 differences bottom out near eps per panel, so the absolute target
  // grows with the number of oscillations.
  opts.absTol = 1e-13 * scale * std::max(1.0, phaseVariation / 1000.0);
  opts.relTol = 1e-14;
  opts.maxPanels = 200000;
  const QuadResult q = integrate_adaptive_nothrow(integrand, 0.0, sMax, opts, {}, initial);

  OracleResult out{q.value, q.error, q.panels};
  const double required = (r <= 50.0) ? 1e-10 : 1e-6;
  if (!(out.error <= required)) {
    throw AccuracyError("scaled_K_oracle: accuracy not attained at r=" + std::to_string(r) +
                        ", u=" + std::to_string(u));
  }
  return out;
}

double scaled_K_oracle(double r, double u) { return scaled_K_oracle_detail(r, u).value; }

BesselEvaluation scaled_K(double r, double u, double absTol) {
  if (!(r > 0.0) || !(u > 0.0)) throw DomainError("scaled_K: r and u must be positive");
  const BesselRegime regime = classify_regime(r, u);

  auto quadrature = [&]() {
    if (r > kOracleMaxOrder) {
      throw AccuracyError("scaled_K: transition-zone input with r above the quadrature limit");
    }
    const OracleResult o = scaled_K_oracle_detail(r, u);
    BesselEvaluation e;
    e.value = o.value;
    e.regime = regime;
    e.errorEstimate = o.error;
    e.termsUsed = 0;
    return e;
  };

  if (regime.tag == Regime::transition) return quadrature();
  if (r * phase_H(u / r) <= 1.0) return quadrature();
  BesselEvaluation asym = scaled_K_asymptotic(r, u);
  if (asym.errorEstimate <= absTol) return asym;
  BesselEvaluation longer = scaled_K_asymptotic(r, u, kMaxAsymptoticTerms);
  if (longer.errorEstimate <= absTol || r > kOracleMaxOrder) {
    return longer.errorEstimate < asym.errorEstimate ? longer : asym;
  }
  return quadrature();
}

double scaled_K_majorant(double r, double u) {
  const BesselRegime regime = classify_regime(r, u);
  switch (regime.tag) {
    case Regime::oscillatory:
      return 1.1 * std::sqrt(2.0 * kPi) / std::sqrt(std::sqrt((r - u) * (r + u)));
    case Regime::transition:
      return kTransitionBoundConstant / std::cbrt(r);
    case Regime::exponential:
      return 1.1 * std::sqrt(0.5 * kPi) * std::exp(-r * phase_H(u / r)) /
             std::sqrt(std::sqrt((u - r) * (u + r)));
  }
  return 0.0;
}

}  // namespace maasslab
