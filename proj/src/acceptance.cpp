#include "maasslab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "maasslab/eigensolver.hpp"
#include "maasslab/errors.hpp"
#include "maasslab/nodal.hpp"
#include "maasslab/norms.hpp"
#include "maasslab/oscillation.hpp"
#include "maasslab/parallel.hpp"
#include "maasslab/quadrature.hpp"
#include "maasslab/special.hpp"

namespace maasslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Windows holding the three lowest even eigenvalues.
const SolverConfig kFormWindows[3] = {
    {13.7, 13.9, 0, 0.8, 1e-8, 1e-3},
    {17.6, 17.9, 0, 0.8, 1e-8, 1e-3},
    {19.3, 19.5, 0, 0.8, 1e-8, 1e-3},
};

class FormCache {
 public:
  const SolvedForm& get(int i) {
    if (!forms_[i]) forms_[i] = solve_even_form_detail(kFormWindows[i]);
    return *forms_[i];
  }

 private:
  std::optional<SolvedForm> forms_[3];
};

// Stratified (r, u) samples: a third in each regime.
std::vector<std::pair<double, double>> bessel_samples(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    const double r = 5.0 + 245.0 * unit(rng);
    const double w = kRegimeCutoff * std::cbrt(r);
    double u = 0.0;
    switch (i % 3) {
      case 0: u = (r - w) * (0.01 + 0.99 * unit(rng)); break;
      case 1: u = r - w + 2.0 * w * unit(rng); break;
      default: u = r + w + 3.0 * w * unit(rng); break;
    }
    out.emplace_back(r, u);
  }
  return out;
}

Outcome criterion_bessel(std::uint64_t seed) {
  const auto samples = bessel_samples(seed, 500);
  std::vector<double> ratio(samples.size());
  std::vector<int> regime(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto [r, u] = samples[i];
    const BesselEvaluation e = scaled_K(r, u);
    const double oracle = scaled_K_oracle(r, u);
    const double allowed = std::max(e.errorEstimate, 1e-6 * std::abs(oracle));
    ratio[i] = std::abs(e.value - oracle) / allowed;
    regime[i] = static_cast<int>(e.regime.tag);
  });
  int bad = 0, counts[3] = {0, 0, 0};
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(ratio[i] <= 1.0)) ++bad;
    worst = std::max(worst, ratio[i]);
    ++counts[regime[i]];
  }
  return {bad == 0 && counts[0] > 0 && counts[1] > 0 && counts[2] > 0,
          fmt("%zu samples (osc %d, trans %d, exp %d), %d outside tolerance, worst |err|/allowed "
              "%.3g",
              samples.size(), counts[0], counts[1], counts[2], bad, worst)};
}

Outcome criterion_bounds() {
  int oscBad = 0, transBad = 0, nOsc = 0, nTrans = 0;
  double worstOsc = 0.0, worstTrans = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r = 5.0 + 245.0 * i / 49.0;
    const double w = kRegimeCutoff * std::cbrt(r);
    for (int j = 0; j < 10; ++j) {
      const double u = (r - w) * (0.02 + 0.98 * j / 9.0);
      if (!(u > 0.0)) continue;
      const double v = std::abs(scaled_K(r, u).value);
      const double bound = 1.1 * std::sqrt(2.0 * kPi) / std::pow(r * r - u * u, 0.25);
      worstOsc = std::max(worstOsc, v / bound);
      oscBad += v > bound;
      ++nOsc;
    }
    for (int j = 0; j <= 10; ++j) {
      const double u = r - w + 2.0 * w * j / 10.0;
      if (!(u > 0.0)) continue;
      const double v = std::abs(scaled_K(r, u).value);
      const double ratio = v * std::cbrt(r);
      worstTrans = std::max(worstTrans, ratio);
      transBad += ratio > kTransitionBoundConstant;
      ++nTrans;
    }
  }
  return {oscBad == 0 && transBad == 0 && kTransitionBoundConstant <= 3.0,
          fmt("oscillatory %d/%d within bound (max ratio %.4f); transition %d/%d within A=%.2f "
              "(max |K| r^(1/3) %.4f)",
              nOsc - oscBad, nOsc, worstOsc, nTrans - transBad, nTrans, kTransitionBoundConstant,
              worstTrans)};
}

Outcome criterion_solver(FormCache& cache) {
  const SolvedForm& base = cache.get(0);
  const double t0 = base.form.t;
  double spread = 0.0;
  double worstAut = automorphy_residual(base.form, 20);
  for (int m0 : {0, 36}) {
    for (double y0 : {0.8, 0.75}) {
      if (m0 == 0 && y0 == 0.8) continue;
      SolverConfig cfg = kFormWindows[0];
      cfg.m0 = m0;
      cfg.y0 = y0;
      const SolvedForm s = solve_even_form_detail(cfg);
      spread = std::max(spread, std::abs(s.form.t - t0));
      worstAut = std::max(worstAut, automorphy_residual(s.form, 20));
    }
  }
  const bool inWindow = t0 >= 13.7 && t0 <= 13.9;
  return {inWindow && spread <= 1e-6 && worstAut <= 1e-5,
          fmt("t1=%.9f, max deviation over (M0,y0) variants %.2e, max automorphy residual %.2e",
              t0, spread, worstAut)};
}

Outcome criterion_parseval(FormCache& cache) {
  int bad = 0;
  std::string parts;
  for (int i = 0; i < 2; ++i) {
    const MaassForm& f = cache.get(i).form;
    for (double y : {1.0, 2.0, 5.0}) {
      const int N = truncation_length(f, y, 1e-14);
      const HorocycleDirect d = horocycle_l2_direct(f, y, 8 * N + 64);
      const HorocycleParseval p = horocycle_l2_mainterm(f, y);
      const double diff = std::abs(d.value - p.mainTerm);
      bad += !(diff <= p.errorBudget);
      parts += fmt("%s t=%.3f y=%g |diff|=%.3g budget=%.3g", parts.empty() ? "" : ";", f.t, y,
                   diff, p.errorBudget);
    }
  }
  return {bad == 0, parts};
}

Outcome criterion_area() {
  DomainQuadrature q;
  q.infiniteTail = true;
  const DomainIntegral r =
      integrate_fundamental_domain([](double) { return Slice{[](double) { return 1.0; }, 0}; }, q);
  const double err = std::abs(r.value - kPi / 3.0);
  return {err <= 1e-6, fmt("area %.12f, |area - pi/3| = %.2e", r.value, err)};
}

Outcome criterion_l4(FormCache& cache) {
  const double lo = 9.0 / (3.0 * kPi), hi = 27.0 / kPi;
  double v[3];
  bool inside = true;
  for (int i = 0; i < 3; ++i) {
    v[i] = l4_norm(cache.get(i).form).value;
    inside = inside && v[i] >= lo && v[i] <= hi;
  }
  const double growth = v[2] / v[0] - 1.0;
  return {inside && growth <= 0.5,
          fmt("||phi||_4^4 = %.4f, %.4f, %.4f (window [%.4f, %.4f]); growth first to third %.1f%%",
              v[0], v[1], v[2], lo, hi, 100.0 * growth)};
}

Outcome criterion_littlewood(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 6);
  int violations = 0, held = 0, forcedHeld = 0, cases = 0, agree = 0;
  const double scale = 1e9;  // f(y) = P(scale * y) on [0, 1]
  const double N = 1e8;
  const double kShrink = 1.0 - 1e-12;  // keeps M1 >= c M2 clear of rounding
  for (int trial = 0; trial < 200; ++trial) {
    const int K = degree(rng);
    std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
      a[k] = coef(rng);
      b[k] = coef(rng);
    }
    auto P = [a, b, K](double y) {
      double s = 0.0;
      for (int k = 1; k <= K; ++k) s += a[k] * std::cos(2 * kPi * k * y) + b[k] * std::sin(2 * kPi * k * y);
      return s;
    };
    const int zeros = trig_poly_zero_count(a, b);
    const SegmentFunction seg = custom_segment(P, 0.0, 1.0, true);
    agree += count_sign_changes(seg) == zeros;

    // Unscaled: every quantity computed numerically.
    const LittlewoodCertificate direct =
        littlewood_certify(seg, [](double) { return 0.0; }, 0.5, 0.1, N);
    ++cases;
    held += direct.premisesHold;
    violations += direct.premisesHold && direct.lowerBound > zeros;

    // Scaled by 1e9: M1, M2 are those of P; eta = 1/scale spans a full period
    // so the inner integral of a mean-zero function vanishes and J = 0.
    const double M1 = M_lambda(seg, 1.0), M2 = M_lambda(seg, 2.0);
    const double omega = N / scale;
    const LittlewoodCertificate forced =
        littlewood_from_values(0.0, 1.0, kShrink * M1 / M2, omega, N, M1, M2, 0.0, 0.0);
    ++cases;
    forcedHeld += forced.premisesHold;
    violations += forced.premisesHold && forced.lowerBound > static_cast<long long>(scale) * zeros;
  }
  // Forced sinusoids sin(2 pi m y), m = 10^9: 2m zeros.
  for (double m : {1e9, 2e9, 5e9}) {
    const double M1 = 2.0 / kPi, M2 = std::sqrt(0.5);
    const LittlewoodCertificate forced =
        littlewood_from_values(0.0, 1.0, kShrink * M1 / M2, N / m, N, M1, M2, 0.0, 0.0);
    ++cases;
    forcedHeld += forced.premisesHold;
    violations += forced.premisesHold && forced.lowerBound > 2.0 * m;
  }
  return {violations == 0,
          fmt("%d certificates, premises held in %d numeric and %d forced cases, %d violations; "
              "sampled counts matched root counts for %d/200 polynomials",
              cases, held, forcedHeld, violations, agree)};
}

Outcome criterion_phase(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eps = 0.1;
  int signBad = 0, lowerBad = 0, sameBad = 0, total = 0;
  double worst = 0.0;
  for (double t : {50.0, 100.0, 200.0}) {
    const double edge = t - std::pow(t, 1.0 - eps);
    const int nMax = static_cast<int>(std::floor(edge / kPi));
    std::uniform_int_distribution<int> pick(1, nMax);
    int done = 0;
    while (done < 1000) {
      PhaseQuadruple q{pick(rng), pick(rng), pick(rng), 0, t};
      q.n4 = q.n1 + q.n2 - q.n3;
      if (q.n4 < 1 || q.n4 > nMax || q.n1 == q.n3 || q.n1 == q.n4) continue;
      const int top = std::max({q.n1, q.n2, q.n3, q.n4});
      const double yMax = edge / (2.0 * kPi * top);
      if (!(yMax > 0.5)) continue;
      const double y = 0.5 + (yMax - 0.5) * unit(rng);
      const double d = phase_d(q, y), dp = phase_dprime(q, y);
      const double delta = double(q.n1) * q.n2 - double(q.n3) * q.n4;
      const double lower = kPhaseKappa * y * std::abs(delta) / t;
      signBad += !(d / -delta > 0.0);
      lowerBad += !(std::abs(d) >= lower);
      sameBad += !(d * dp > 0.0);
      worst = std::max(worst, lower / std::abs(d));
      ++done;
      ++total;
    }
  }
  return {signBad + lowerBad + sameBad == 0,
          fmt("%d quadruples; violations: sign law %d, lower bound (kappa=2pi^2) %d, d'd>0 %d; "
              "max kappa y|n1n2-n3n4|/(t|d|) = %.4f",
              total, signBad, lowerBad, sameBad, worst)};
}

Outcome criterion_signs(FormCache& cache) {
  long long counts[2];
  double best[2];
  double bestA[2];
  for (int i = 0; i < 2; ++i) {
    const MaassForm& f = cache.get(i).form;
    counts[i] = count_sign_changes(horocycle_segment(f, 1.0));
    // a is free in the selection; scan it and keep the best fraction.
    std::vector<double> as;
    for (int k = 0; k <= 16; ++k) as.push_back(0.4 + 0.1 * k);
    std::vector<double> frac(as.size());
    parallel_for(as.size(), [&](std::size_t k) {
      frac[k] = select_good_heights(f, as[k], 0.5, 0.01, std::pow(f.t, 0.3)).successFraction();
    });
    const auto it = std::max_element(frac.begin(), frac.end());
    best[i] = *it;
    bestA[i] = as[it - frac.begin()];
  }
  const bool countsOk = counts[0] > 0 && counts[1] > counts[0];
  const bool heightsOk = best[0] >= 0.9 && best[1] >= 0.9;
  return {countsOk && heightsOk,
          fmt("horocycle y=1 sign changes %lld, %lld; best good-height fraction at M=t^0.3: "
              "%.3f (a=%.1f), %.3f (a=%.1f) for a in [0.4, 2.0]",
              counts[0], counts[1], best[0], bestA[0], best[1], bestA[1])};
}

Outcome criterion_nodal() {
  int bad = 0;
  for (int m = 1; m <= 8; ++m) {
    for (int n = 1; n <= 8; ++n) {
      const SignGrid g = sample_grid(
          [m, n](double x, double y) { return std::sin(2 * kPi * m * x) * std::sin(2 * kPi * n * y); },
          Rect{0.0, 1.0, 0.0, 1.0}, 64 * m + 7, 64 * n + 7);
      bad += count_components(g) != 4 * m * n;
    }
  }
  const double formula = 2.0 / kPi * (3.0 * std::sqrt(3.0) - 5.0);
  const double stated = 0.1248703;
  const bool constOk = std::abs(kBsTarget - stated) <= 1e-7;
  return {bad == 0 && constOk,
          fmt("separable products: %d/64 exact; bsTarget %.10f = (2/pi)(3 sqrt 3 - 5) to %.1e, "
              "differs from 0.1248703 by %.2e",
              64 - bad, kBsTarget, std::abs(kBsTarget - formula), std::abs(kBsTarget - stated))};
}

struct Criterion {
  int id;
  const char* name;
  double budget;
};

const Criterion kCriteria[] = {
    {1, "bessel-oracle-agreement", 60},  {2, "kernel-bounds", 10},
    {3, "eigensolver-stability", 300},   {4, "horocycle-parseval", 120},
    {5, "domain-area", 5},               {6, "l4-norms", 600},
    {7, "littlewood-soundness", 60},     {8, "phase-difference-sweep", 10},
    {9, "horocycle-sign-changes", 300},  {10, "nodal-exactness", 10},
    {11, "determinism", 180},
};

// Criteria that need no solved forms; criterion 11 reruns them.
constexpr int kReplayable[] = {1, 2, 5, 7, 8, 10};

Outcome run_one(int id, std::uint64_t seed, FormCache& cache) {
  switch (id) {
    case 1: return criterion_bessel(seed + 1);
    case 2: return criterion_bounds();
    case 3: return criterion_solver(cache);
    case 4: return criterion_parseval(cache);
    case 5: return criterion_area();
    case 6: return criterion_l4(cache);
    case 7: return criterion_littlewood(seed + 7);
    case 8: return criterion_phase(seed + 8);
    case 9: return criterion_signs(cache);
    case 10: return criterion_nodal();
  }
  throw DomainError("unknown criterion " + std::to_string(id));
}

// Temporarily overrides the worker count seen by parallel_for.
class WorkerOverride {
 public:
  explicit WorkerOverride(const char* value) {
    if (const char* old = std::getenv("MAASSLAB_WORKERS")) saved_ = old;
    setenv("MAASSLAB_WORKERS", value, 1);
  }
  ~WorkerOverride() {
    if (saved_) {
      setenv("MAASSLAB_WORKERS", saved_->c_str(), 1);
    } else {
      unsetenv("MAASSLAB_WORKERS");
    }
  }

 private:
  std::optional<std::string> saved_;
};

}  // namespace

int trig_poly_zero_count(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("trig_poly_zero_count: bad sizes");
  int K = static_cast<int>(a.size()) - 1;
  while (K > 0 && a[K] == 0.0 && b[K] == 0.0) --K;
  if (K == 0) throw DomainError("trig_poly_zero_count: constant polynomial");
  // z^K P(theta) with z = e^{i theta} is a polynomial of degree 2K.
  std::vector<std::complex<double>> c(2 * K + 1);
  c[K] = a[0];
  for (int k = 1; k <= K; ++k) {
    c[K + k] = std::complex<double>(a[k], -b[k]) * 0.5;
    c[K - k] = std::complex<double>(a[k], b[k]) * 0.5;
  }
  const int deg = 2 * K;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  int count = 0;
  for (int i = 0; i < deg; ++i) count += std::abs(std::abs(es.eigenvalues()[i]) - 1.0) < 1e-7;
  return count;
}

std::string report_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " +
         r.detail;
}

bool AcceptanceReport::allPass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

std::string AcceptanceReport::text() const {
  std::string out;
  for (const auto& r : results) out += report_line(r) + "\n";
  return out;
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts,
                                const std::function<void(const CriterionResult&)>& onResult) {
  auto selected = [&](int id) {
    return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
  };
  FormCache cache;
  AcceptanceReport report;
  std::map<int, std::string> firstRun;
  for (const Criterion& c : kCriteria) {
    if (!selected(c.id)) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budgetSeconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (c.id == 11) {
        // Replay the seeded criteria with a single worker and compare the
        // report lines byte for byte.
        int mismatches = 0, replayed = 0;
        for (int id : kReplayable) {
          std::string first;
          if (auto it = firstRun.find(id); it != firstRun.end()) {
            first = it->second;
          } else {
            Outcome o = run_one(id, opts.seed, cache);
            first = o.detail + (o.pass ? "+" : "-");
          }
          WorkerOverride single("1");
          Outcome again = run_one(id, opts.seed, cache);
          mismatches += first != again.detail + (again.pass ? "+" : "-");
          ++replayed;
        }
        r.pass = mismatches == 0;
        r.detail = fmt("%d seeded criteria replayed with one worker, %d differing reports", replayed,
                       mismatches);
      } else {
        Outcome o = run_one(c.id, opts.seed, cache);
        r.pass = o.pass;
        r.detail = o.detail;
        firstRun[c.id] = o.detail + (o.pass ? "+" : "-");
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budgetSeconds) {
      r.pass = false;
      r.detail += fmt(" [over the %.0f s budget]", r.budgetSeconds);
    }
    if (onResult) onResult(r);
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace maasslab
