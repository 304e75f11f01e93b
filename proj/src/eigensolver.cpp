#include "maasslab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "maasslab/coefficient_file.hpp"
#include "maasslab/errors.hpp"
#include "maasslab/norms.hpp"
#include "maasslab/parallel.hpp"
#include "maasslab/special.hpp"

namespace maasslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int truncation(const SolverConfig& cfg) {
  return cfg.m0 > 0 ? cfg.m0 : static_cast<int>(std::ceil(2.0 * cfg.tMax));
}

// W(u) with relative accuracy, which the column scaling needs.
double W(double t, double u) {
  return scaled_K(t, u, 1e-14 * scaled_K_majorant(t, u)).value;
}

struct Geometry {
  int M = 0, Q = 0;
  double Y = 0.0;
  std::vector<double> x;      // collocation abscissae x_m
  std::vector<Point> pulled;  // pullbacks of x_m + iY
};

Geometry geometry(int M, double Y) {
  Geometry g;
  g.M = M;
  g.Q = M + 12;
  g.Y = Y;
  for (int m = 1; m <= g.Q; ++m) {
    const double x = (m - 0.5) / (2.0 * g.Q);
    g.x.push_back(x);
    g.pulled.push_back(pullback({x, Y}));
  }
  return g;
}

// Column k is divided by W(kY) when kY lies past the turning point for every
// t in the search interval, so the scaling is continuous in t.
std::vector<double> column_scales(double t, const Geometry& g, double tMax) {
  std::vector<double> s(g.M + 1, 1.0);
  const double edge = tMax + kRegimeCutoff * std::cbrt(tMax);
  for (int k = 1; k <= g.M; ++k) {
    if (kTwoPi * k * g.Y > edge) s[k] = W(t, kTwoPi * k * g.Y);
  }
  return s;
}

Eigen::MatrixXd build_matrix(double t, const Geometry& g, const std::vector<double>& scales) {
  const int M = g.M, Q = g.Q;
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(M, M);
  // B(m, k) = sqrt(y*_m / Y) W(k y*_m) cos(2 pi k x*_m) / s_k
  Eigen::MatrixXd B(Q, M);
  for (int m = 0; m < Q; ++m) {
    const Point& z = g.pulled[m];
    const double root = std::sqrt(z.y / g.Y);
    for (int k = 1; k <= M; ++k) {
      B(m, k - 1) = root * W(t, kTwoPi * k * z.y) * std::cos(kTwoPi * k * z.x) / scales[k];
    }
  }
  Eigen::MatrixXd C(M, Q);
  for (int n = 1; n <= M; ++n) {
    for (int m = 0; m < Q; ++m) C(n - 1, m) = (2.0 / Q) * std::cos(kTwoPi * n * g.x[m]);
  }
  V = C * B;
  for (int n = 1; n <= M; ++n) V(n - 1, n - 1) -= W(t, kTwoPi * n * g.Y) / scales[n];
  return V;
}

struct Context {
  Geometry g;
  double tMax;
};

Context context(const SolverConfig& cfg) { return {geometry(truncation(cfg), cfg.y0), cfg.tMax}; }

double sigma_min(double t, const Context& c) {
  const Eigen::MatrixXd V = build_matrix(t, c.g, column_scales(t, c.g, c.tMax));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  return svd.singularValues()(c.g.M - 1);
}

struct Normalized {
  Eigen::VectorXd scaled;  // a(k) s_k
  std::vector<double> scales;
  double residual = 0.0;
  Eigen::MatrixXd V;
};

Normalized normalized_solution(double t, const Context& c) {
  const int M = c.g.M;
  Normalized out;
  out.scales = column_scales(t, c.g, c.tMax);
  out.V = build_matrix(t, c.g, out.scales);
  const Eigen::MatrixXd A = out.V.bottomRightCorner(M - 1, M - 1);
  const Eigen::VectorXd rhs = -out.V.block(1, 0, M - 1, 1) * out.scales[1];
  out.scaled.resize(M);
  out.scaled(0) = out.scales[1];
  out.scaled.tail(M - 1) = A.partialPivLu().solve(rhs);
  out.residual = out.V.row(0).dot(out.scaled);
  return out;
}

std::vector<double> raw_coefficients(const Normalized& s) {
  std::vector<double> a(s.scaled.size() + 1, 0.0);
  for (int k = 1; k <= s.scaled.size(); ++k) a[k] = s.scaled(k - 1) / s.scales[k];
  return a;
}

// phi(z) / (2 rho1), from the collocation coefficients.
double expansion(double t, const std::vector<double>& a, Point z) {
  double s = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double u = kTwoPi * k * z.y;
    const double w = W(t, u);
    if (w == 0.0) break;
    s += a[k] * w * std::cos(kTwoPi * k * z.x);
  }
  return std::sqrt(z.y) * s;
}

// a(p) from the Fourier coefficient of the expansion on a horocycle low
// enough that W(pY) is of unit size.
double extract_prime(double t, const std::vector<double>& a, int p) {
  std::vector<double> heights;
  const double turning = t / (kTwoPi * p);
  if (turning < 0.86) heights.push_back(turning);
  for (double y : {0.85, 0.75, 0.65}) heights.push_back(y);
  double bestY = heights.front(), bestW = 0.0;
  for (double y : heights) {
    const double w = std::abs(W(t, kTwoPi * p * y));
    if (w > bestW) {
      bestW = w;
      bestY = y;
    }
  }
  const int Q = 3 * p + 20;
  double c = 0.0;
  for (int m = 1; m <= Q; ++m) {
    const double x = (m - 0.5) / (2.0 * Q);
    c += expansion(t, a, pullback({x, bestY})) * std::cos(kTwoPi * p * x);
  }
  c *= 2.0 / Q;
  return c / (std::sqrt(bestY) * W(t, kTwoPi * p * bestY));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SolvedForm finish(double t, const Context& c, const SolverConfig& cfg, double sigmaRoot,
                  double med) {
  const Normalized sol = normalized_solution(t, c);
  const int M = c.g.M;
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sol.V.bottomRightCorner(M - 1, M - 1));
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(M - 2);
    if (!(cond < 1e13)) {
      throw SolverError("ill-conditioned collocation system at t=" + std::to_string(t) +
                        " (condition estimate " + std::to_string(cond) + ")");
    }
  }
  const std::vector<double> a = raw_coefficients(sol);

  const int nMax = static_cast<int>(std::ceil(t)) + kTableMargin;
  const std::vector<int> primes = primes_up_to(nMax);
  std::vector<double> values(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    const int p = primes[i];
    values[i] = (p <= M && kTwoPi * p * cfg.y0 <= t) ? a[p] : extract_prime(t, a, p);
  });
  std::map<int, double> table;
  for (std::size_t i = 0; i < primes.size(); ++i) table[primes[i]] = values[i];

  SolvedForm out;
  const HeckeTable hecke = hecke_extend(table, nMax);
  out.form = make_form(t, table, l2_normalizing_rho(t, hecke), "even", nMax);
  out.diagnostics.t = t;
  out.diagnostics.sigmaAtRoot = sigmaRoot;
  out.diagnostics.medianSigma = med;
  out.diagnostics.rawCoefficients = a;
  if (M >= 6) {
    out.diagnostics.heckeResidual4 = std::abs(a[4] - (a[2] * a[2] - 1.0));
    out.diagnostics.heckeResidual6 = std::abs(a[6] - a[2] * a[3]);
  }
  out.diagnostics.automorphyResidual = automorphy_residual(out.form);
  if (!(out.diagnostics.automorphyResidual <= cfg.tolerance)) {
    throw SolverError("automorphy residual " + std::to_string(out.diagnostics.automorphyResidual) +
                      " above tolerance at t=" + std::to_string(t));
  }
  return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.tMin > 0.0) || !(cfg.tMax > cfg.tMin)) {
    throw DomainError("solver: search interval must satisfy 0 < t-min < t-max");
  }
  if (!(cfg.y0 > 0.5 && cfg.y0 < 1.0)) throw DomainError("solver: y0 must lie in (0.5, 1)");
  if (truncation(cfg) < 2.0 * cfg.tMax) throw DomainError("solver: m0 must be at least 2 t-max");
  if (!(cfg.tolerance > 0.0)) throw DomainError("solver: tolerance must be positive");
  if (!(cfg.gridStep > 0.0)) throw DomainError("solver: grid step must be positive");
  if (cfg.tMax > 60.0) throw DomainError("solver: t above 60 is out of scope");
}

double collocation_sigma_min(double t, const SolverConfig& cfg) {
  validate(cfg);
  return sigma_min(t, context(cfg));
}

double collocation_residual(double t, const SolverConfig& cfg) {
  validate(cfg);
  return normalized_solution(t, context(cfg)).residual;
}

std::vector<double> collocation_coefficients(double t, const SolverConfig& cfg) {
  validate(cfg);
  return raw_coefficients(normalized_solution(t, context(cfg)));
}

std::vector<ScanPoint> scan_sigma(const SolverConfig& cfg) {
  validate(cfg);
  const Context c = context(cfg);
  const int steps = static_cast<int>(std::floor((cfg.tMax - cfg.tMin) / cfg.gridStep + 1e-9));
  std::vector<ScanPoint> pts(steps + 1);
  parallel_for(pts.size(), [&](std::size_t i) {
    const double t = std::min(cfg.tMax, cfg.tMin + i * cfg.gridStep);
    pts[i] = {t, sigma_min(t, c)};
  });
  return pts;
}

std::vector<SolvedForm> solve_even_forms(const SolverConfig& cfg) {
  validate(cfg);
  const Context c = context(cfg);
  const std::vector<ScanPoint> scan = scan_sigma(cfg);
  std::vector<double> sig;
  for (const auto& p : scan) sig.push_back(p.sigmaMin);
  const double med = median(sig);

  std::vector<double> roots;
  auto F = [&](double t) { return normalized_solution(t, c).residual; };
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    if (!(sig[i] < sig[i - 1] && sig[i] <= sig[i + 1])) continue;
    double lo = scan[i - 1].t, hi = scan[i + 1].t;
    double flo = F(lo), fhi = F(hi);
    if (flo * fhi > 0.0 && i >= 2 && i + 2 < scan.size()) {
      lo = scan[i - 2].t;
      hi = scan[i + 2].t;
      flo = F(lo);
      fhi = F(hi);
    }
    if (flo * fhi > 0.0) continue;
    boost::uintmax_t iters = 100;
    const auto bracket = boost::math::tools::toms748_solve(
        F, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(48), iters);
    const double root = 0.5 * (bracket.first + bracket.second);
    // Reject poles of the row-one residual: the matrix must be singular there.
    if (sigma_min(root, c) < 1e-3 * med) roots.push_back(root);
  }
  if (roots.empty()) {
    throw SolverError("no eigenvalue found in [" + std::to_string(cfg.tMin) + ", " +
                      std::to_string(cfg.tMax) + "]");
  }
  // Zeros of W(nY) in t produce singular systems that are not eigenvalues;
  // the automorphy check in finish() rejects them.
  std::vector<SolvedForm> out;
  std::string rejected;
  for (double t : roots) {
    try {
      out.push_back(finish(t, c, cfg, sigma_min(t, c), med));
    } catch (const SolverError& e) {
      rejected += std::string(rejected.empty() ? "" : "; ") + e.what();
    }
  }
  if (out.empty()) {
    throw SolverError("no eigenvalue found in [" + std::to_string(cfg.tMin) + ", " +
                      std::to_string(cfg.tMax) + "]: " + rejected);
  }
  return out;
}

SolvedForm solve_even_form_detail(const SolverConfig& cfg) { return solve_even_forms(cfg).front(); }

MaassForm solve_even_form(const SolverConfig& cfg) { return solve_even_form_detail(cfg).form; }

double automorphy_residual(const MaassForm& form, int count) {
  double worst = 0.0;
  for (int j = 0; j < count; ++j) {
    // Deterministic spread over |x| <= 1/2, 0.8 <= |z| <= 1.25.
    const double fx = std::fmod(0.5 + j * 0.6180339887498949, 1.0);
    const double fr = std::fmod(0.25 + j * 0.7548776662466927, 1.0);
    const double x = fx - 0.5;
    const double r = 0.8 + 0.45 * fr;
    const Point z{x, std::sqrt(r * r - x * x)};
    const double r2 = r * r;
    const Point w{-z.x / r2, z.y / r2};
    worst = std::max(worst, std::abs(evaluate_phi(form, w) - evaluate_phi(form, z)));
  }
  return worst;
}

double l2_normalizing_rho(double t, const HeckeTable& table) {
  MaassForm f;
  f.t = t;
  f.hecke = table;
  f.rhoOne = 1.0;
  const NormResult r = lp_integral(f, 2.0);
  return 1.0 / std::sqrt(r.value);
}

MaassForm ingest_form(const std::string& path) { return load_form(path); }

}  // namespace maasslab
