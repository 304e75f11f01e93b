#include "maasslab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "maasslab/errors.hpp"
#include "maasslab/quadrature.hpp"
#include "maasslab/special.hpp"

namespace maasslab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr long long kMaxSamples = 1LL << 22;
constexpr long long kMaxCells = 1LL << 22;

// Grid spacing fine enough to resolve f: 20 cells per zero spacing.
double resolving_step(const SegmentFunction& f) {
  const double len = f.b - f.a;
  double h = len / std::max(256, f.resolutionHint);
  if (f.oscillationScale > 0.0) h = std::min(h, f.oscillationScale / 20.0);
  return h;
}

void check_segment(const SegmentFunction& f, const char* who) {
  if (!f.f) throw DomainError(std::string(who) + ": segment has no function");
  if (!(f.b > f.a)) throw DomainError(std::string(who) + ": empty interval");
}

long long sign_changes_on_grid(const SegmentFunction& f, long long m) {
  const double len = f.b - f.a;
  // A fixed offset keeps the grids nested under doubling while avoiding
  // the symmetric points where test functions tend to vanish exactly.
  const double shift = f.periodic ? 0.0123456789 * len / 64.0 : 0.0;
  const long long count = f.periodic ? m : m + 1;
  int first = 0, prev = 0;
  long long changes = 0;
  for (long long j = 0; j < count; ++j) {
    const double y = f.a + shift + len * static_cast<double>(j) / static_cast<double>(m);
    const double v = f.f(y);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (first == 0) first = s;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  if (f.periodic && first != 0 && prev != first) ++changes;
  return changes;
}

}  // namespace

SegmentFunction custom_segment(std::function<double(double)> f, double a, double b, bool periodic,
                               int resolutionHint) {
  if (!(b > a)) throw DomainError("custom_segment: empty interval");
  SegmentFunction s;
  s.f = std::move(f);
  s.a = a;
  s.b = b;
  s.periodic = periodic;
  s.resolutionHint = resolutionHint;
  return s;
}

SegmentFunction horocycle_segment(const MaassForm& form, double y) {
  if (!(y > 0.0)) throw DomainError("horocycle_segment: y must be positive");
  auto row = std::make_shared<const KernelRow>(kernel_row(form, y, 1e-12));
  SegmentFunction s;
  s.kind = "horocycle";
  s.f = [row](double x) { return cosine_series(*row, x); };
  s.a = -0.5;
  s.b = 0.5;
  s.periodic = true;
  const int N = static_cast<int>(row->coeff.size()) - 1;
  s.oscillationScale = 1.0 / (2.0 * std::max(1, N));
  s.resolutionHint = 64;
  return s;
}

SegmentFunction vertical_segment(const MaassForm& form, double x, double a, double h) {
  if (!(a > 0.0)) throw DomainError("vertical_segment: a must be positive");
  if (!(h > 0.0)) throw DomainError("vertical_segment: h must be positive");
  auto shared = std::make_shared<const MaassForm>(form);
  SegmentFunction s;
  s.kind = "vertical";
  s.f = [shared, x](double y) { return evaluate_Phi(*shared, Point{x, y}, 1e-10); };
  s.a = a;
  s.b = a + h;
  s.domainEnd = a + 2.0 * h;
  // The phase of the n-th term moves at rate h_n / y <= t / y.
  s.oscillationScale = kPi * a / form.t;
  s.resolutionHint = 64;
  return s;
}

SegmentFunction axis_segment(const MaassForm& form, double a, double h) {
  SegmentFunction s = vertical_segment(form, 0.0, a, h);
  s.kind = "axis";
  return s;
}

double M_lambda(const SegmentFunction& f, double lambda) {
  check_segment(f, "M_lambda");
  if (!(lambda > 0.0)) throw DomainError("M_lambda: lambda must be positive");
  const double len = f.b - f.a;
  const long long cells = static_cast<long long>(std::ceil(len / resolving_step(f)));
  if (cells > kMaxCells) throw AccuracyError("M_lambda: segment needs too many cells");
  AdaptiveOptions opts;
  opts.absTol = 1e-13;
  opts.relTol = 1e-10;
  opts.maxPanels = static_cast<int>(4 * cells + 1000);
  const QuadResult q = integrate_adaptive(
      [&](double y) { return std::pow(std::abs(f.f(y)), lambda); }, f.a, f.b, opts, {},
      static_cast<int>(cells));
  return std::pow(std::max(0.0, q.value) / len, 1.0 / lambda);
}

double J_functional(const SegmentFunction& f, double eta) {
  check_segment(f, "J_functional");
  if (!(eta > 0.0)) throw DomainError("J_functional: eta must be positive");
  const double end = f.b + eta;
  if (!f.periodic && end > f.domainEnd) {
    throw DomainError("J_functional: function not evaluable on [b, b + eta]");
  }
  const double len = f.b - f.a;
  const double h0 = resolving_step(f);
  const long long cells = static_cast<long long>(std::ceil((end - f.a) / h0));
  if (cells > kMaxCells) throw AccuracyError("J_functional: segment needs too many cells");
  const double h = (end - f.a) / static_cast<double>(cells);

  // Antiderivative F at the nodes, then cubic Hermite in between (F' = f).
  const GaussRule& gl = gauss_legendre(8);
  std::vector<double> F(cells + 1), fv(cells + 1);
  CompensatedSum acc;
  F[0] = 0.0;
  for (long long i = 0; i <= cells; ++i) {
    const double y0 = f.a + h * static_cast<double>(i);
    fv[i] = f.f(y0);
    if (i == cells) break;
    double cell = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      cell += gl.weights[k] * f.f(y0 + 0.5 * h * (gl.nodes[k] + 1.0));
    }
    acc.add(0.5 * h * cell);
    F[i + 1] = acc.value();
  }
  auto antiderivative = [&](double y) {
    long long i = static_cast<long long>(std::floor((y - f.a) / h));
    i = std::clamp<long long>(i, 0, cells - 1);
    const double s = (y - f.a) / h - static_cast<double>(i);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * F[i] + h10 * h * fv[i] + h01 * F[i + 1] + h11 * h * fv[i + 1];
  };

  const long long outerCells = std::max<long long>(1, static_cast<long long>(std::ceil(len / h)));
  const double ho = len / static_cast<double>(outerCells);
  const GaussRule& go = gauss_legendre(6);
  CompensatedSum outer;
  for (long long i = 0; i < outerCells; ++i) {
    const double y0 = f.a + ho * static_cast<double>(i);
    double cell = 0.0;
    for (std::size_t k = 0; k < go.nodes.size(); ++k) {
      const double y = y0 + 0.5 * ho * (go.nodes[k] + 1.0);
      cell += go.weights[k] * std::abs(antiderivative(y + eta) - antiderivative(y));
    }
    outer.add(0.5 * ho * cell);
  }
  return outer.value() / len;
}

long long count_sign_changes(const SegmentFunction& f) {
  check_segment(f, "count_sign_changes");
  const double len = f.b - f.a;
  long long base = std::max(64, f.resolutionHint);
  if (f.oscillationScale > 0.0) {
    base = std::max(base, static_cast<long long>(std::ceil(20.0 * len / f.oscillationScale)));
  }
  long long m = 1;
  while (m < base) m *= 2;
  long long prev = sign_changes_on_grid(f, m);
  int agreements = 0;
  while (agreements < 2 && 2 * m <= kMaxSamples) {
    m *= 2;
    const long long c = sign_changes_on_grid(f, m);
    agreements = (c == prev) ? agreements + 1 : 0;
    prev = c;
  }
  return prev;
}

// ---------------------------------------------------------------------------

LittlewoodCertificate littlewood_from_values(double a, double b, double c, double omega, double N,
                                             double M1, double M2, double J, double gBound) {
  if (!(b > a)) throw DomainError("littlewood: empty interval");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("littlewood: c must lie in (0, 1]");
  if (!(omega >= 0.0)) throw DomainError("littlewood: omega must be nonnegative");
  if (!(N > 0.0)) throw DomainError("littlewood: N must be positive");
  LittlewoodCertificate out;
  out.a = a;
  out.b = b;
  out.c = c;
  out.omega = omega;
  out.N = N;
  out.eta = omega * (b - a) / N;
  out.M1 = M1;
  out.M2 = M2;
  out.J = J;
  out.gBound = gBound;

  std::vector<std::string> failed;
  const bool m = M1 >= c * M2;
  const bool j = J < c * c * c * out.eta * M2 / 16.0;
  const bool g = gBound <= c * c / 32.0;
  if (!m) failed.push_back("M1>=cM2");
  if (!j) failed.push_back("J<c^3 eta M2/16");
  if (!g) failed.push_back("|g|<=c^2/32");
  const bool nStrict = N > kLittlewoodNFactor * (omega + 7.0);
  if (!nStrict) failed.push_back("N>1e7(omega+7)");
  for (std::size_t i = 0; i < failed.size(); ++i) {
    out.failedPremises += (i ? "," : "") + failed[i];
  }

  const double conclusion = c * c * N / (10.0 * (omega + 2.0));
  out.premisesHold = m && j && g && nStrict;
  if (out.premisesHold) out.lowerBound = static_cast<long long>(std::ceil(conclusion));
  out.relaxedPremisesHold = m && j && g && N > kRelaxedNFactor * (omega + 7.0);
  if (out.relaxedPremisesHold) out.relaxedLowerBound = static_cast<long long>(std::ceil(conclusion));
  return out;
}

LittlewoodCertificate littlewood_certify(const SegmentFunction& f,
                                         const std::function<double(double)>& g, double c,
                                         double omega, double N) {
  check_segment(f, "littlewood_certify");
  if (!(N > 0.0)) throw DomainError("littlewood: N must be positive");
  const double M1 = M_lambda(f, 1.0);
  const double M2 = M_lambda(f, 2.0);
  const double eta = omega * (f.b - f.a) / N;

  double gBound = 0.0;
  const double len = f.b - f.a;
  const int gSamples = 4096;
  for (int i = 0; i <= gSamples; ++i) {
    gBound = std::max(gBound, std::abs(g(f.a + (len + eta) * i / gSamples)));
  }

  double J = 0.0;
  if (eta > 0.0) {
    SegmentFunction f1 = f;
    f1.f = [&f, &g, M2](double y) { return f.f(y) - g(y) * M2; };
    J = J_functional(f1, eta);
  }
  return littlewood_from_values(f.a, f.b, c, omega, N, M1, M2, J, gBound);
}

// ---------------------------------------------------------------------------

std::complex<double> dirichlet_poly(std::span<const double> lambda, double T, double x,
                                    std::complex<double> s) {
  const long long nMax = static_cast<long long>(std::floor(T));
  if (nMax >= static_cast<long long>(lambda.size())) {
    throw TableExtentError("dirichlet_poly: coefficients needed up to " + std::to_string(nMax));
  }
  std::complex<double> sum = 0.0;
  for (long long n = 1; n <= nMax; ++n) {
    const double logn = std::log(static_cast<double>(n));
    // e(nx) n^{-s} = n^{-Re s} exp(i (2 pi n x - Im s log n))
    const double phase = kTwoPi * n * (x - std::round(x)) - s.imag() * logn;
    sum += lambda[n] * std::exp(-s.real() * logn) * std::polar(1.0, phase);
  }
  return sum;
}

std::complex<double> dirichlet_poly(const MaassForm& form, double x, std::complex<double> s) {
  return dirichlet_poly(form.hecke.values(), form.t, x, s);
}

JPair J1_J2(std::span<const double> lambda, double tPhi, double x, double delta) {
  if (!(delta > 0.0 && delta < 0.01)) throw DomainError("J1_J2: delta must lie in (0, 1/100)");
  if (!(tPhi > 1.0)) throw DomainError("J1_J2: t must exceed 1");
  const double logt = std::log(tPhi);
  const double lo = std::pow(tPhi, 1.0 - delta);
  auto L2 = [&](double tau) { return std::norm(dirichlet_poly(lambda, tPhi, x, {0.5, tau})); };
  AdaptiveOptions opts;
  opts.absTol = 1e-13;
  opts.relTol = 1e-11;
  opts.maxPanels = 100000;
  // |L|^2 oscillates at frequencies up to 2 log t.
  const int panels = std::max(4, static_cast<int>(std::ceil((tPhi + logt) * logt / kPi)));
  const double brk[] = {tPhi};
  const QuadResult q1 = integrate_adaptive(
      [&](double tau) { return L2(tau) / std::sqrt(std::abs(tPhi - tau) + 1.0); }, lo,
      tPhi + logt, opts, brk, std::max(1, panels / 2));
  const QuadResult q2 = integrate_adaptive(L2, 0.0, lo, opts, {}, panels);
  JPair out;
  out.J1 = std::max(0.0, logt / std::sqrt(tPhi) * q1.value);
  out.J2 = std::max(0.0, logt / tPhi * q2.value);
  return out;
}

JPair J1_J2(const MaassForm& form, double x, double delta) {
  return J1_J2(form.hecke.values(), form.t, x, delta);
}

JPsiBound J_psi_bound(const MaassForm& form, double y, double eta) {
  if (!(y > 0.0)) throw DomainError("J_psi_bound: y must be positive");
  if (!(eta >= 0.0)) throw DomainError("J_psi_bound: eta must be nonnegative");
  const double t = form.t;
  const double cy = kTwoPi * y;
  const double t13 = std::cbrt(t);
  const int nMax = static_cast<int>(std::ceil(t)) - 1;  // n < t
  if (nMax > form.hecke.extent()) {
    throw TableExtentError("J_psi_bound: table needs extent " + std::to_string(nMax));
  }
  const auto& lam = form.hecke.values();
  CompensatedSum s1, s2, s3, s4;
  for (int n = 1; n <= nMax; ++n) {
    const double l2 = lam[n] * lam[n];
    const double u = cy * n;
    if (u < 0.5 * t) {
      const double s = std::sin(kPi * n * eta);
      s1.add(l2 / (double(n) * n) * s * s / std::sqrt(t * t - u * u));
    } else if (u < t - t13) {
      s2.add(l2 / std::sqrt(t - u));
    } else if (u < t + t13) {
      s3.add(l2);
    } else {
      s4.add(l2 / std::sqrt(u - t));
    }
  }
  JPsiBound out;
  out.J1 = s1.value();
  out.J2 = std::pow(t, -2.5) * s2.value();
  out.J3 = std::pow(t, -2.0 - 2.0 / 3.0) * s3.value();
  out.J4 = std::pow(t, -2.5) * s4.value();
  return out;
}

// ---------------------------------------------------------------------------

void validate(const PhaseQuadruple& q) {
  if (q.n1 < 1 || q.n2 < 1 || q.n3 < 1 || q.n4 < 1) {
    throw DomainError("PhaseQuadruple: entries must be positive");
  }
  if (q.n1 + q.n2 != q.n3 + q.n4) throw DomainError("PhaseQuadruple: n1 + n2 != n3 + n4");
  if (q.n1 == q.n3 || q.n1 == q.n4) throw DomainError("PhaseQuadruple: n1 in {n3, n4}");
  if (!(q.t > 0.0)) throw DomainError("PhaseQuadruple: t must be positive");
}

namespace {

struct PhaseData {
  double c2;  // (2 pi y)^2
  double h[4];
  double delta;  // n1 n2 - n3 n4
  double plus;   // n1 n2 + n3 n4
};

PhaseData phase_data(const PhaseQuadruple& q, double y) {
  if (!(y > 0.0)) throw DomainError("phase: y must be positive");
  if (q.n1 < 1 || q.n2 < 1 || q.n3 < 1 || q.n4 < 1 || q.n1 + q.n2 != q.n3 + q.n4) {
    throw DomainError("phase: invalid quadruple");
  }
  PhaseData d;
  const double c = kTwoPi * y;
  d.c2 = c * c;
  const int n[4] = {q.n1, q.n2, q.n3, q.n4};
  for (int i = 0; i < 4; ++i) {
    const double u = c * n[i];
    if (!(u < q.t)) throw DomainError("phase: 2 pi n y must be below t");
    d.h[i] = std::sqrt((q.t - u) * (q.t + u));
  }
  d.delta = double(q.n1) * q.n2 - double(q.n3) * q.n4;
  d.plus = double(q.n1) * q.n2 + double(q.n3) * q.n4;
  return d;
}

}  // namespace

double phase_D(const PhaseQuadruple& q, double y) {
  phase_data(q, y);  // domain checks
  const double k = kTwoPi * y / q.t;
  // Pair n1 with whichever of n3, n4 it equals so degenerate quadruples give 0 exactly.
  const int m3 = q.n1 == q.n4 ? q.n4 : q.n3;
  const int m4 = q.n1 == q.n4 ? q.n3 : q.n4;
  return q.t * ((phase_H(k * q.n1) - phase_H(k * m3)) + (phase_H(k * q.n2) - phase_H(k * m4)));
}

double phase_d(const PhaseQuadruple& q, double y) {
  const PhaseData d = phase_data(q, y);
  const double* h = d.h;
  const double t2 = q.t * q.t;
  // h1+h2-h3-h4 = [h1^2+h2^2-h3^2-h4^2 + 2(h1h2 - h3h4)] / (h1+h2+h3+h4), where
  // h1^2+h2^2-h3^2-h4^2 = 2 c^2 delta and
  // h1h2 - h3h4 = c^2 delta (2t^2 + c^2 plus) / (h1h2 + h3h4).
  const double pairSum = h[0] * h[1] + h[2] * h[3];
  const double bracket = 2.0 + 2.0 * (2.0 * t2 + d.c2 * d.plus) / pairSum;
  const double diff = d.c2 * d.delta * bracket / (h[0] + h[1] + h[2] + h[3]);
  return -diff / y;
}

double phase_dprime(const PhaseQuadruple& q, double y) {
  const PhaseData d = phase_data(q, y);
  const double* h = d.h;
  const double t2 = q.t * q.t;
  const double c2 = d.c2;
  const double n1 = q.n1, n2 = q.n2;
  // 1/h1+1/h2-1/h3-1/h4 = (X - Y)/(h1h2h3h4), X = h3h4(h1+h2), Y = h1h2(h3+h4),
  // X^2 - Y^2 = H1 + 2 h1h2h3h4 H2 / (h1h2 + h3h4).
  const double H2 = -d.delta * c2 * (2.0 * t2 + c2 * d.plus);
  const double H1 = -d.delta * c2 *
                    (2.0 * (t2 * t2 - c2 * c2 * n1 * n1 * n2 * n2) +
                     d.plus * c2 * (2.0 * t2 - c2 * (n1 * n1 + n2 * n2)));
  const double prod = h[0] * h[1] * h[2] * h[3];
  const double X = h[2] * h[3] * (h[0] + h[1]);
  const double Y = h[0] * h[1] * (h[2] + h[3]);
  const double diff2 = H1 + 2.0 * prod * H2 / (h[0] * h[1] + h[2] * h[3]);
  const double sumRecip = diff2 / (X + Y) / prod;
  return t2 / (y * y) * sumRecip;
}

// ---------------------------------------------------------------------------

HeightSelection select_good_heights(const MaassForm& form, double a, double eps, double eps1,
                                    double M) {
  if (!(a > 0.0)) throw DomainError("select_good_heights: a must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("select_good_heights: eps must lie in (0, 1)");
  if (!(eps1 > 0.0 && eps1 < eps / 10.0)) {
    throw DomainError("select_good_heights: eps1 must lie in (0, eps/10)");
  }
  if (!(M >= 0.0)) throw DomainError("select_good_heights: M must be nonnegative");
  const double t = form.t;
  const double eps2 = eps1 / 10.0;
  const double floorTerm = std::pow(t, eps2);
  HeightSelection out;
  out.windows = static_cast<int>(std::ceil(std::pow(t, 1.0 - eps)));
  const double width = 1.0 / out.windows;
  for (int k = 1; k <= out.windows; ++k) {
    const double lo = a + (k - 1) * width;
    for (int j = 0; j < kHeightSearchSamples; ++j) {
      const double Y = lo + width * (j + 0.5) / kHeightSearchSamples;
      const KernelRow row = kernel_row(form, Y, 1e-12);
      const int N = static_cast<int>(row.coeff.size()) - 1;
      CompensatedSum two;
      for (int n = 1; n <= N; ++n) two.add(2.0 * row.coeff[n] * row.coeff[n]);
      // psi^4 is a trigonometric polynomial of degree 4N.
      const double four = integrate_periodic(
          [&](double x) {
            const double v = cosine_series(row, x);
            return v * v * v * v;
          },
          -0.5, 1.0, 4 * N + 8);
      if (floorTerm + four <= M * two.value() * two.value()) {
        out.successes.push_back({k, Y});
        break;
      }
    }
  }
  return out;
}

SignCertificate certify_sign_changes(const MaassForm& form, const SegmentFunction& seg,
                                     const SignCertificateParams& params) {
  if (!(params.eps > 0.0 && params.eps < 1.0)) throw DomainError("certify: eps must lie in (0, 1)");
  if (!(params.eps1 > 0.0)) throw DomainError("certify: eps1 must be positive");
  const double t = form.t;
  double omega = params.omega;
  if (omega <= 0.0) {
    if (seg.kind == "horocycle") {
      omega = std::pow(t, 4.0 * params.eps1);
    } else if (seg.kind == "vertical") {
      omega = std::pow(t, 8.0 * params.eps1);
    } else if (seg.kind == "axis") {
      omega = std::pow(t, 11.0 * params.eps1);
    } else {
      throw DomainError("certify: omega required for custom segments");
    }
  }
  if (seg.kind == "axis" && !params.assumeLindelof) {
    throw DomainError("certify: axis mode needs assumeLindelof");
  }
  const double N = params.N > 0.0 ? params.N : t;
  const double c = std::min(1.0, std::pow(t, -params.eps1 / 2.0));
  SignCertificate out;
  out.certificate = littlewood_certify(seg, [](double) { return 0.0; }, c, omega, N);
  out.directCount = count_sign_changes(seg);
  return out;
}

}  // namespace maasslab
