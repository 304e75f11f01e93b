#include "maasslab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "maasslab/errors.hpp"
#include "maasslab/parallel.hpp"
#include "maasslab/quadrature.hpp"

namespace maasslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_dims(int nx, int ny) {
  if (nx < 1 || ny < 1) throw DomainError("sample_grid: nx and ny must be positive");
}

}  // namespace

void validate(const Rect& r) {
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw DomainError("rect: empty rectangle");
  if (!(r.y0 > 0.0)) throw DomainError("rect: must lie in y > 0");
}

double oscillation_scale(const MaassForm& form, const Rect& rect) {
  return 2.0 * kPi * rect.y0 / form.t;
}

SignGrid sample_grid(const MaassForm& form, const Rect& rect, int nx, int ny) {
  validate(rect);
  check_dims(nx, ny);
  const double scale = oscillation_scale(form, rect);
  const double hx = (rect.x1 - rect.x0) / nx, hy = (rect.y1 - rect.y0) / ny;
  if (std::max(hx, hy) > scale / 10.0) {
    throw DomainError("sample_grid: spacing " + std::to_string(std::max(hx, hy)) +
                      " exceeds oscillation scale / 10 = " + std::to_string(scale / 10.0));
  }
  SignGrid g;
  g.rect = rect;
  g.nx = nx;
  g.ny = ny;
  g.signs.assign(static_cast<std::size_t>(nx) * ny, 0);
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    const double y = g.y(static_cast<int>(j));
    const KernelRow row = kernel_row(form, y, 1e-12);
    double power = 0.0;  // mean of Phi^2 over a period
    for (std::size_t n = 1; n < row.coeff.size(); ++n) power += 2.0 * row.coeff[n] * row.coeff[n];
    const double tol = kZeroThreshold * std::sqrt(power);
    for (int i = 0; i < nx; ++i) {
      // phi and Phi differ by the positive factor rho sqrt(y).
      const double v = cosine_series(row, g.x(i));
      g.signs[j * nx + i] = static_cast<signed char>(std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1));
    }
  });
  return g;
}

SignGrid sample_grid(const std::function<double(double, double)>& f, const Rect& rect, int nx,
                     int ny, double zeroTol) {
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) throw DomainError("rect: empty rectangle");
  check_dims(nx, ny);
  SignGrid g;
  g.rect = rect;
  g.nx = nx;
  g.ny = ny;
  g.signs.assign(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = f(g.x(i), g.y(j));
      g.signs[static_cast<std::size_t>(j) * nx + i] =
          static_cast<signed char>(std::abs(v) <= zeroTol ? 0 : (v > 0 ? 1 : -1));
    }
  }
  return g;
}

int count_components(const SignGrid& grid) {
  const std::size_t total = static_cast<std::size_t>(grid.nx) * grid.ny;
  if (grid.signs.size() != total) throw DomainError("count_components: malformed grid");
  UnionFind uf(total);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int s = grid.at(i, j);
      if (s == 0) continue;
      const std::size_t k = static_cast<std::size_t>(j) * grid.nx + i;
      if (i + 1 < grid.nx && grid.at(i + 1, j) == s) uf.unite(k, k + 1);
      if (j + 1 < grid.ny && grid.at(i, j + 1) == s) uf.unite(k, k + grid.nx);
    }
  }
  int count = 0;
  for (std::size_t k = 0; k < total; ++k) {
    if (grid.signs[k] != 0 && uf.find(k) == k) ++count;
  }
  return count;
}

Locus parse_locus(const std::string& name) {
  if (name == "delta1") return Locus::delta1;
  if (name == "delta2") return Locus::delta2;
  if (name == "delta3") return Locus::delta3;
  throw DomainError("unknown locus '" + name + "' (expected delta1, delta2 or delta3)");
}

std::string to_string(Locus l) {
  switch (l) {
    case Locus::delta1: return "delta1";
    case Locus::delta2: return "delta2";
    case Locus::delta3: return "delta3";
  }
  return "?";
}

SegmentFunction locus_segment(const MaassForm& form, Locus locus, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("locus: empty interval");
  switch (locus) {
    case Locus::delta1:
      return vertical_segment(form, 0.0, lo, hi - lo);
    case Locus::delta2:
      return vertical_segment(form, 0.5, lo, hi - lo);
    case Locus::delta3: {
      if (!(lo > 0.5 * kPi && hi <= 2.0 * kPi / 3.0 + 1e-12)) {
        throw DomainError("locus: delta3 angles must lie in (pi/2, 2pi/3]");
      }
      auto shared = std::make_shared<const MaassForm>(form);
      SegmentFunction s;
      s.kind = "custom";
      s.f = [shared](double theta) {
        return evaluate_Phi(*shared, Point{std::cos(theta), std::sin(theta)}, 1e-10);
      };
      s.a = lo;
      s.b = hi;
      // Unit arc speed; the local wavelength is at least 2 pi sin(theta) / t.
      s.oscillationScale = kPi * std::sin(hi) / form.t;
      s.resolutionHint = 64;
      return s;
    }
  }
  throw DomainError("locus: unknown");
}

int inert_lower_bound(const SegmentFunction& restriction) {
  const long long k = count_sign_changes(restriction);
  return 1 + static_cast<int>((k + 1) / 2);
}

int inert_lower_bound(const MaassForm& form, Locus locus, double lo, double hi) {
  return inert_lower_bound(locus_segment(form, locus, lo, hi));
}

SignGrid report_grid(const MaassForm& form, const Rect& rect, int resolution) {
  validate(rect);
  if (resolution < 10) throw DomainError("nodal: resolution must be at least 10");
  const double h = oscillation_scale(form, rect) / resolution;
  const int nx = static_cast<int>(std::ceil((rect.x1 - rect.x0) / h));
  const int ny = static_cast<int>(std::ceil((rect.y1 - rect.y0) / h));
  return sample_grid(form, rect, nx, ny);
}

NodalReport nodal_report(const MaassForm& form, const Rect& rect, int resolution) {
  const SignGrid g = report_grid(form, rect, resolution);
  NodalReport r;
  r.rect = rect;
  r.nx = g.nx;
  r.ny = g.ny;
  r.componentCount = count_components(g);
  r.courantBudget = form.eigenvalue() / 24.0;
  r.bsRatio = r.componentCount / r.courantBudget;
  r.courantOk = r.componentCount <= (1.0 + kCourantSlack) * r.courantBudget;
  if (rect.x0 <= 0.0 && rect.x1 >= 0.0) {
    r.inertLocus = "delta1";
    r.inertLowerBound = inert_lower_bound(form, Locus::delta1, rect.y0, rect.y1);
  } else if (rect.x0 <= 0.5 && rect.x1 >= 0.5) {
    r.inertLocus = "delta2";
    r.inertLowerBound = inert_lower_bound(form, Locus::delta2, rect.y0, rect.y1);
  }
  return r;
}

}  // namespace maasslab
