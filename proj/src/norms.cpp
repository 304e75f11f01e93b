#include "maasslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include "maasslab/errors.hpp"
#include "maasslab/quadrature.hpp"
#include "maasslab/special.hpp"

namespace maasslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

int gauss_points(int quadOrder, int bandwidth, double length) {
  const int needed = static_cast<int>(std::ceil(kPi * bandwidth * length)) + 20;
  return std::clamp(std::max(quadOrder, needed), 2, 400);
}

}  // namespace

DomainIntegral integrate_fundamental_domain(const SliceFactory& slices,
                                            const DomainQuadrature& opts) {
  if (opts.quadOrder < 2) throw DomainError("fundamental domain quadrature: quadOrder must be >= 2");
  if (!(opts.yMax >= 1.0)) throw DomainError("fundamental domain quadrature: yMax must be >= 1");

  AdaptiveOptions ao;
  ao.absTol = opts.panelTol;
  ao.relTol = 1e-12;
  ao.maxPanels = 20000;

  // Below y = 1 the domain is bounded by the unit circle. With y = sin(a),
  // a in [pi/3, pi/2], the x-range is [cos a, 1/2] on each side.
  auto lowerIntegrand = [&](double a) {
    const double y = std::sin(a);
    const double xc = std::cos(a);
    const Slice s = slices(y);
    const double len = 0.5 - xc;
    if (len <= 0.0) return 0.0;
    const int n = gauss_points(opts.quadOrder, s.bandwidth, len);
    const double right = integrate_gauss(s.f, xc, 0.5, n);
    const double left = integrate_gauss(s.f, -0.5, -xc, n);
    return (left + right) * xc / (y * y);
  };
  const QuadResult lower = integrate_adaptive(lowerIntegrand, kPi / 3.0, kPi / 2.0, ao, {}, 4);

  auto row = [&](double y) {
    const Slice s = slices(y);
    const int P = std::max(opts.quadOrder, 2 * s.bandwidth + 2);
    return integrate_periodic(s.f, -0.5, 1.0, P);
  };
  DomainIntegral out;
  out.lower = lower.value;
  out.error = lower.error;
  if (opts.yMax > 1.0) {
    const int panels = std::max(1, static_cast<int>(std::ceil(opts.panelsPerUnit * (opts.yMax - 1.0))));
    const QuadResult upper =
        integrate_adaptive([&](double y) { return row(y) / (y * y); }, 1.0, opts.yMax, ao, {}, panels);
    out.upper = upper.value;
    out.error += upper.error;
  }
  if (opts.infiniteTail) {
    // dy / y^2 = -dw with w = 1/y.
    const QuadResult tail =
        integrate_adaptive([&](double w) { return row(1.0 / w); }, 0.0, 1.0 / opts.yMax, ao, {}, 4);
    out.tail = tail.value;
    out.error += tail.error;
  }
  out.value = out.lower + out.upper + out.tail;
  return out;
}

HorocycleDirect horocycle_l2_direct(const MaassForm& form, double y, int gridSize) {
  if (!(y >= 0.5)) throw DomainError("horocycle_l2_direct: requires y >= 1/2");
  if (gridSize < 1) throw DomainError("horocycle_l2_direct: gridSize must be positive");
  const KernelRow row = kernel_row(form, y, 1e-14);
  HorocycleDirect out;
  out.truncation = static_cast<int>(row.coeff.size()) - 1;
  out.underResolved = gridSize <= 4 * out.truncation;
  CompensatedSum acc;
  for (int j = 0; j < gridSize; ++j) {
    const double x = -0.5 + (j + 0.5) / gridSize;
    const double v = cosine_series(row, x);
    acc.add(v * v);
  }
  out.value = acc.value() / gridSize;
  CompensatedSum par;
  for (std::size_t n = 1; n < row.coeff.size(); ++n) par.add(2.0 * row.coeff[n] * row.coeff[n]);
  out.parseval = par.value();
  return out;
}

HorocycleParseval horocycle_l2_mainterm(const MaassForm& form, double y, double eps) {
  if (!(y > 0.5)) throw DomainError("horocycle_l2_mainterm: requires y > 1/2");
  if (!(eps > 0.0)) throw DomainError("horocycle_l2_mainterm: eps must be positive");
  const double t = form.t;
  HorocycleParseval out;
  out.y = y;
  out.Delta = std::cbrt(t) * std::log(t);
  out.errorBudget = kParsevalConstant * std::pow(t, 2.0 * kKimSarnakTheta - 2.0 / 3.0 + eps) *
                    (out.Delta / y + 1.0);
  if (y > t / kTwoPi) {
    out.outOfRange = true;
    return out;
  }
  const int nEnd = static_cast<int>(std::floor((t - out.Delta) / (kTwoPi * y)));
  out.windowEnd = std::max(0, nEnd);
  CompensatedSum acc;
  for (int n = 1; n <= nEnd; ++n) {
    const double u = kTwoPi * n * y;
    const double lam = form.hecke(n);
    const double s = std::sin(0.25 * kPi + t * phase_H(u / t));
    // Both signs of n.
    acc.add(2.0 * kTwoPi * lam * lam * s * s / std::sqrt((t - u) * (t + u)));
  }
  out.mainTerm = acc.value();
  return out;
}

double phi_sup_bound(const MaassForm& form, double y) {
  if (!(y > 0.0)) throw DomainError("phi_sup_bound: y must be positive");
  const double t = form.t;
  const double edge = t + kRegimeCutoff * std::cbrt(t);
  double s = 0.0;
  for (int n = 1; n < 10'000'000; ++n) {
    const double u = kTwoPi * n * y;
    const double b = (n <= form.hecke.extent()) ? std::abs(form.hecke.values()[n]) : coefficient_bound(n);
    const double term = b * scaled_K_majorant(t, u);
    s += term;
    if (u > edge && term <= 1e-17 * s) break;
  }
  return 2.0 * form.rhoOne * std::sqrt(y) * s;
}

NormResult lp_integral(const MaassForm& form, double p, double yMax, int quadOrder) {
  if (!(p >= 1.0)) throw DomainError("lp_integral: p must be >= 1");
  if (!(yMax >= 1.0)) throw DomainError("lp_integral: yMax must be >= 1");
  SliceFactory slices = [&form, p](double y) {
    auto row = std::make_shared<KernelRow>(kernel_row(form, y, 1e-13));
    const double scale = form.rhoOne * std::sqrt(y);
    Slice s;
    s.bandwidth = static_cast<int>(std::ceil(p * (row->coeff.size() - 1)));
    s.f = [row, scale, p](double x) {
      const double v = std::abs(scale * cosine_series(*row, x));
      return p == 2.0 ? v * v : (p == 4.0 ? (v * v) * (v * v) : std::pow(v, p));
    };
    return s;
  };
  DomainQuadrature dq;
  dq.quadOrder = quadOrder;
  dq.yMax = yMax;
  const DomainIntegral d = integrate_fundamental_domain(slices, dq);

  AdaptiveOptions ao;
  ao.absTol = 1e-16;
  ao.relTol = 1e-6;
  const QuadResult tail = integrate_adaptive_nothrow(
      [&](double w) { return std::pow(phi_sup_bound(form, 1.0 / w), p); }, 0.0, 1.0 / yMax, ao, {}, 4);
  return {d.value, tail.value + tail.error, d.error};
}

NormResult l4_norm(const MaassForm& form, double yMax, int quadOrder) {
  return lp_integral(form, 4.0, yMax, quadOrder);
}

double lp_norm(const MaassForm& form, double p, double yMax, int quadOrder) {
  if (!(p >= 2.0)) throw DomainError("lp_norm: p must be >= 2");
  return std::pow(lp_integral(form, p, yMax, quadOrder).value, 1.0 / p);
}

double geodesic_l2(const MaassForm& form, double a, double b) {
  if (!(a > 0.0) || !(b > a)) throw DomainError("geodesic_l2: need 0 < a < b");
  auto f = [&](double y) {
    const KernelRow row = kernel_row(form, y, 1e-14);
    double s = 0.0;
    for (std::size_t n = 1; n < row.coeff.size(); ++n) s += row.coeff[n];
    const double v = 2.0 * form.rhoOne * std::sqrt(y) * s;
    return v * v / y;
  };
  AdaptiveOptions ao;
  ao.absTol = 1e-12;
  ao.relTol = 1e-11;
  const int panels = static_cast<int>(std::ceil(form.t * std::log(b / a) / kPi)) + 4;
  return integrate_adaptive(f, a, b, ao, {}, panels).value;
}

// ---------------------------------------------------------------------------

int l_epsilon(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0 / 3.0)) throw DomainError("range decomposition: eps must lie in (0, 1/3)");
  // 1 - eps(l+1) >= eps + 1/3 > 1 - eps(l+2)
  int l = static_cast<int>(std::floor((2.0 / 3.0 - eps) / eps)) - 1;
  while (l > 0 && 1.0 - eps * (l + 1) < eps + 1.0 / 3.0) --l;
  while (1.0 - eps * (l + 2) >= eps + 1.0 / 3.0) ++l;
  return std::max(l, 0);
}

std::vector<RangePiece> range_windows(double t, double eps) {
  const int le = l_epsilon(eps);
  const double inf = std::numeric_limits<double>::infinity();
  const double w2 = std::pow(t, eps + 1.0 / 3.0);
  const double w21 = std::cbrt(t);
  std::vector<RangePiece> out;
  out.push_back({"psi0", 0, 0.0, t - std::pow(t, 1.0 - eps), 0.0});
  for (int l = 1; l <= le; ++l) {
    out.push_back({"psi1l", l, t - std::pow(t, 1.0 - l * eps), t - std::pow(t, 1.0 - (l + 1) * eps), 0.0});
  }
  out.push_back({"psi1eps", 0, t - std::pow(t, 1.0 - (le + 1) * eps), t - w2, 0.0});
  out.push_back({"psi21", 0, t - w21, t + w21, 0.0});
  out.push_back({"psi22", 0, t - w2, t + w2, 0.0});
  out.push_back({"psi3", 0, t + w2, inf, 0.0});
  return out;
}

namespace {

// Index into range_windows() of the piece containing u = 2 pi n y.
int piece_index(const std::vector<RangePiece>& w, double u) {
  const std::size_t i21 = w.size() - 3;
  if (u >= w[i21].uLo && u < w[i21].uHi) return static_cast<int>(i21);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == i21) continue;
    if (u >= w[i].uLo && u < w[i].uHi) return static_cast<int>(i);
  }
  return 0;  // u below every window lower edge: psi0 starts at 0
}

}  // namespace

std::string piece_of(double t, double eps, int n, double y) {
  const auto w = range_windows(t, eps);
  const auto& p = w[piece_index(w, kTwoPi * n * y)];
  return p.label == "psi1l" ? "psi1l(" + std::to_string(p.l) + ")" : p.label;
}

std::pair<double, double> piece_value(const MaassForm& form, double eps, const std::string& label,
                                      int l, Point z) {
  const auto w = range_windows(form.t, eps);
  std::complex<double> s = 0.0;
  for (int n = 1; n < form.t; ++n) {
    const double u = kTwoPi * n * z.y;
    const auto& p = w[piece_index(w, u)];
    const bool match = label == "psi" || p.label == label ||
                       (label == "psi2" && (p.label == "psi21" || p.label == "psi22"));
    if (!match || (label == "psi1l" && p.l != l)) continue;
    const double k = scaled_K(form.t, u, 1e-14).value;
    s += form.hecke(n) * k * std::polar(1.0, kTwoPi * n * z.x);
  }
  return {s.real(), s.imag()};
}

std::vector<RangePiece> range_decomposition(const MaassForm& form, double eps, double yMax) {
  if (!(yMax > 0.5)) throw DomainError("range_decomposition: yMax must exceed 1/2");
  const double t = form.t;
  auto windows = range_windows(t, eps);
  const int nTop = static_cast<int>(std::ceil(t)) - 1;  // n < t
  if (nTop > form.hecke.extent()) throw TableExtentError("range_decomposition: table too short");

  // Kernel values per height, shared by every piece.
  std::map<double, std::vector<double>> cache;
  auto coefficients = [&](double y) -> const std::vector<double>& {
    auto it = cache.find(y);
    if (it != cache.end()) return it->second;
    std::vector<double> c(nTop + 1, 0.0);
    for (int n = 1; n <= nTop; ++n) c[n] = form.hecke.values()[n] * scaled_K(t, kTwoPi * n * y, 1e-14).value;
    return cache.emplace(y, std::move(c)).first->second;
  };

  std::vector<double> breaks;
  for (const auto& w : windows) {
    for (double edge : {w.uLo, w.uHi}) {
      if (!std::isfinite(edge) || edge <= 0.0) continue;
      for (int n = 1; n <= nTop; ++n) {
        const double y = edge / (kTwoPi * n);
        if (y > 0.5 && y < yMax) breaks.push_back(y);
      }
    }
  }
  for (double y = 0.625; y < yMax; y += 0.125) breaks.push_back(y);
  std::sort(breaks.begin(), breaks.end());

  const int P = 4 * nTop + 8;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto f = [&](double y) {
      const auto& c = coefficients(y);
      std::vector<int> members;
      for (int n = 1; n <= nTop; ++n) {
        if (piece_index(windows, kTwoPi * n * y) == static_cast<int>(i)) members.push_back(n);
      }
      if (members.empty()) return 0.0;
      CompensatedSum acc;
      for (int j = 0; j < P; ++j) {
        const double x = -0.5 + (j + 0.5) / P;
        std::complex<double> s = 0.0;
        for (int n : members) s += c[n] * std::polar(1.0, kTwoPi * n * x);
        const double m2 = std::norm(s);
        acc.add(m2 * m2);
      }
      return acc.value() / P;
    };
    AdaptiveOptions ao;
    ao.absTol = 1e-9;
    ao.relTol = 1e-9;
    windows[i].contributionL4 = integrate_adaptive(f, 0.5, yMax, ao, breaks, 1).value;
  }
  return windows;
}

}  // namespace maasslab
