#include "maasslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maasslab/errors.hpp"

namespace maasslab {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

namespace {

struct Panel {
  double a, b, value, error;
};

Panel gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  static const auto xk = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
  static const auto wk = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
  static const auto wg = boost::math::quadrature::gauss<double, 10>::weights();

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = wk[0] * f0;
  double gauss = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fs = f(c - h * xk[i]) + f(c + h * xk[i]);
    kron += wk[i] * fs;
    if (i % 2 == 1) gauss += wg[i / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

QuadResult run_adaptive(const std::function<double(double)>& f, double a, double b,
                        const AdaptiveOptions& opts, std::span<const double> breakpoints,
                        int initialPanels, bool& converged) {
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel, std::vector<Panel>, ByError> open;
  std::vector<Panel> settled;
  const int per = std::max(1, initialPanels);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double w = (cuts[i + 1] - cuts[i]) / per;
    for (int k = 0; k < per; ++k) {
      const double lo = cuts[i] + k * w;
      const double hi = (k + 1 == per) ? cuts[i + 1] : cuts[i] + (k + 1) * w;
      open.push(gauss_kronrod_panel(f, lo, hi));
    }
  }

  auto totals = [&]() {
    double v = 0.0, e = 0.0;
    auto copy = open;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  int count = static_cast<int>(open.size());
  converged = true;
  while (error > std::max(opts.absTol, opts.relTol * std::abs(value))) {
    if (open.empty()) break;
    if (count >= opts.maxPanels) {
      converged = false;
      break;
    }
    Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= opts.minWidth || mid <= worst.a || mid >= worst.b) {
      settled.push_back(worst);
      continue;
    }
    const Panel left = gauss_kronrod_panel(f, worst.a, mid);
    const Panel right = gauss_kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++count;
    // Periodically resynchronise the running totals to avoid drift.
    if (count % 512 == 0) std::tie(value, error) = totals();
  }

  while (!open.empty()) {
    settled.push_back(open.top());
    open.pop();
  }
  std::sort(settled.begin(), settled.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  CompensatedSum sv, se;
  for (const auto& p : settled) {
    sv.add(p.value);
    se.add(p.error);
  }
  return {sv.value(), se.value(), static_cast<int>(settled.size())};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const AdaptiveOptions& opts, std::span<const double> breakpoints,
                              int initialPanels) {
  bool converged = true;
  auto r = run_adaptive(f, a, b, opts, breakpoints, initialPanels, converged);
  if (!converged) {
    throw AccuracyError("adaptive quadrature stalled at " + std::to_string(r.panels) +
                        " panels (error estimate " + std::to_string(r.error) + ")");
  }
  return r;
}

QuadResult integrate_adaptive_nothrow(const std::function<double(double)>& f, double a,
                                      double b, const AdaptiveOptions& opts,
                                      std::span<const double> breakpoints, int initialPanels) {
  bool converged = true;
  return run_adaptive(f, a, b, opts, breakpoints, initialPanels, converged);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_gauss(const std::function<double(double)>& f, double a, double b, int n,
                       int panels) {
  const auto& rule = gauss_legendre(n);
  const double w = (b - a) / panels;
  CompensatedSum s;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double c = lo + 0.5 * w;
    for (int i = 0; i < n; ++i) s.add(0.5 * w * rule.weights[i] * f(c + 0.5 * w * rule.nodes[i]));
  }
  return s.value();
}

double integrate_periodic(const std::function<double(double)>& f, double a, double period,
                          int points) {
  CompensatedSum s;
  const double h = period / points;
  for (int i = 0; i < points; ++i) s.add(f(a + i * h));
  return s.value() * h;
}

}  // namespace maasslab
