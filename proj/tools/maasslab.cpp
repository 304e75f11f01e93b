// maasslab command line: kbessel, solve, norm, signs, nodal, selftest.
//
// Exit status: 0 success, 1 computation error, 2 usage error. Result files are
// written atomically (temp file + rename), so a failed run leaves none behind.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maasslab/acceptance.hpp"
#include "maasslab/coefficient_file.hpp"
#include "maasslab/eigensolver.hpp"
#include "maasslab/errors.hpp"
#include "maasslab/nodal.hpp"
#include "maasslab/norms.hpp"
#include "maasslab/oscillation.hpp"
#include "maasslab/special.hpp"

using json = nlohmann::ordered_json;
using namespace maasslab;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file_atomic(outPath, text);
  }
}

void emit_json(const json& j, const std::string& outPath) { emit(j.dump(2) + "\n", outPath); }

json certificate_json(const LittlewoodCertificate& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"eta", c.eta},
          {"omega", c.omega},
          {"N", c.N},
          {"c", c.c},
          {"M1", c.M1},
          {"M2", c.M2},
          {"J", c.J},
          {"g_bound", c.gBound},
          {"premises_hold", c.premisesHold},
          {"lower_bound", c.lowerBound},
          {"failed_premises", c.failedPremises},
          {"relaxed_premises_hold", c.relaxedPremisesHold},
          {"relaxed_lower_bound", c.relaxedLowerBound}};
}

Rect parse_rect(const std::string& s) {
  Rect r;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(s);
  if (!(in >> r.x0 >> c1 >> r.x1 >> c2 >> r.y0 >> c3 >> r.y1) || c1 != ',' || c2 != ',' ||
      c3 != ',' || !(in >> std::ws).eof()) {
    throw UsageError("--rect expects x0,x1,y0,y1");
  }
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0) || !(r.y0 > 0.0)) {
    throw UsageError("--rect must be a nonempty rectangle in y > 0");
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments with Maass cusp forms for SL(2,Z)"};
  // signs takes --h for the segment length, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (overrides MAASSLAB_WORKERS)")
      ->check(CLI::PositiveNumber);

  // kbessel
  auto* kb = app.add_subcommand("kbessel", "Rescaled kernel e^{pi r/2} K_{ir}(u)");
  double kbR = 0.0, kbU = 0.0, kbTol = INFINITY;
  int kbTerms = 0;
  bool kbOracle = false;
  std::string kbOut;
  kb->add_option("--r", kbR, "Order r >= 0")->required();
  kb->add_option("--u", kbU, "Argument u > 0")->required();
  kb->add_option("--terms", kbTerms, "Force the asymptotic series with this many terms");
  kb->add_flag("--oracle", kbOracle, "Force the quadrature oracle");
  kb->add_option("--tol", kbTol, "Absolute tolerance for the dispatch");
  kb->add_option("--out", kbOut, "Write JSON here instead of stdout");

  // solve
  auto* sv = app.add_subcommand("solve", "Find an even Maass form in a spectral window");
  SolverConfig cfg;
  std::string svOut;
  sv->add_option("--t-min", cfg.tMin, "Window start")->required();
  sv->add_option("--t-max", cfg.tMax, "Window end")->required();
  sv->add_option("--m0", cfg.m0, "Truncation (default ceil(2 t-max))");
  sv->add_option("--y0", cfg.y0, "Collocation height in (1/2, 1)");
  sv->add_option("--tol", cfg.tolerance, "Automorphy tolerance");
  sv->add_option("--grid-step", cfg.gridStep, "Scan step in t");
  sv->add_option("--out", svOut, "Coefficient file to write")->required();

  // norm
  auto* nm = app.add_subcommand("norm", "Integral of |phi|^p over the fundamental domain");
  std::string nmForm, nmOut;
  double nmP = 2.0, nmYmax = 10.0, nmEps = 0.1;
  int nmOrder = 32;
  bool nmDecompose = false;
  nm->add_option("--form", nmForm, "Coefficient file")->required();
  nm->add_option("--p", nmP, "Exponent p >= 1");
  nm->add_option("--ymax", nmYmax, "Cut height");
  nm->add_option("--order", nmOrder, "Gauss-Legendre order in the lower region");
  nm->add_flag("--decompose", nmDecompose, "Also report the L4 range decomposition");
  nm->add_option("--eps", nmEps, "Window exponent for --decompose");
  nm->add_option("--out", nmOut, "Write JSON here instead of stdout");

  // signs
  auto* sg = app.add_subcommand("signs", "Sign changes along a segment");
  std::string sgForm, sgSegment = "horocycle", sgOut;
  double sgY = 1.0, sgX = 0.0, sgA = 1.0, sgH = 1.0, sgOmega = 0.0, sgBigN = 0.0;
  SignCertificateParams sgParams;
  bool sgCertify = false;
  sg->add_option("--form", sgForm, "Coefficient file");
  sg->add_option("--segment", sgSegment, "horocycle, vertical or axis")
      ->check(CLI::IsMember({"horocycle", "vertical", "axis"}));
  sg->add_option("--y", sgY, "Horocycle height");
  sg->add_option("--x", sgX, "Abscissa of a vertical segment");
  sg->add_option("--a", sgA, "Lower end of a vertical segment");
  sg->add_option("--h", sgH, "Length of a vertical segment");
  sg->add_flag("--assume-lindelof", sgParams.assumeLindelof, "Accept the Lindelof input (axis)");
  sg->add_flag("--certify", sgCertify, "Also evaluate the Littlewood certificate");
  sg->add_option("--eps", sgParams.eps, "Window exponent");
  sg->add_option("--eps1", sgParams.eps1, "Small exponent");
  sg->add_option("--omega", sgOmega, "Override omega");
  sg->add_option("--bigN", sgBigN, "Override N");
  sg->add_option("--out", sgOut, "Write JSON here instead of stdout");
  sg->require_subcommand(0, 1);

  auto* sc = sg->add_subcommand("scan", "Good heights per window, as CSV");
  std::string scForm, scOut;
  double scA = 1.0, scEps = 0.5, scEps1 = 0.01, scM = 0.0;
  sc->add_option("--form", scForm, "Coefficient file")->required();
  sc->add_option("--a", scA, "Lower end of the height range [a, a+1)");
  sc->add_option("--eps", scEps, "Window exponent");
  sc->add_option("--eps1", scEps1, "Small exponent");
  sc->add_option("--M", scM, "Threshold M (default t^0.3)");
  sc->add_option("--out", scOut, "Write CSV here instead of stdout");

  // nodal
  auto* nd = app.add_subcommand("nodal", "Nodal domains on a rectangle");
  std::string ndForm, ndRect = "-0.5,0.5,1,2", ndCsv, ndOut;
  int ndRes = 20;
  nd->add_option("--form", ndForm, "Coefficient file")->required();
  nd->add_option("--rect", ndRect, "x0,x1,y0,y1");
  nd->add_option("--res", ndRes, "Samples per finest local wavelength (>= 10)");
  nd->add_option("--csv", ndCsv, "Also dump the sign grid (x,y,sign)");
  nd->add_option("--out", ndOut, "Write JSON here instead of stdout");

  // selftest
  auto* st = app.add_subcommand("selftest", "Run the acceptance suite");
  std::uint64_t stSeed = kDefaultSeed;
  std::vector<int> stOnly;
  std::string stOut;
  st->add_option("--seed", stSeed, "Seed for the randomized criteria");
  st->add_option("--only", stOnly, "Run only these criteria")->check(CLI::Range(1, 11));
  st->add_option("--out", stOut, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (workers > 0) setenv("MAASSLAB_WORKERS", std::to_string(workers).c_str(), 1);

    if (kb->parsed()) {
      if (!(kbR >= 0.0) || !(kbU > 0.0)) throw UsageError("kbessel needs r >= 0 and u > 0");
      if (kbTerms < 0 || kbTerms > kMaxAsymptoticTerms) {
        throw UsageError("--terms must lie in [1, " + std::to_string(kMaxAsymptoticTerms) + "]");
      }
      BesselEvaluation e;
      if (kbOracle) {
        const OracleResult o = scaled_K_oracle_detail(kbR, kbU);
        e.value = o.value;
        e.errorEstimate = o.error;
        e.regime = classify_regime(kbR, kbU);
      } else if (kbTerms > 0) {
        e = scaled_K_asymptotic(kbR, kbU, kbTerms);
      } else {
        e = scaled_K(kbR, kbU, kbTol);
      }
      emit_json({{"r", kbR},
                 {"u", kbU},
                 {"value", e.value},
                 {"regime", to_string(e.regime.tag)},
                 {"error_estimate", e.errorEstimate},
                 {"terms_used", e.termsUsed}},
                kbOut);
    } else if (sv->parsed()) {
      try {
        validate(cfg);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      const SolvedForm s = solve_even_form_detail(cfg);
      store_form(svOut, s.form);
      const auto& d = s.diagnostics;
      emit_json({{"t", s.form.t},
                 {"rho1", s.form.rhoOne},
                 {"sigma_at_root", d.sigmaAtRoot},
                 {"median_sigma", d.medianSigma},
                 {"automorphy_residual", d.automorphyResidual},
                 {"hecke_residual_4", d.heckeResidual4},
                 {"hecke_residual_6", d.heckeResidual6},
                 {"soft_bound_flag", s.form.softBoundFlag()},
                 {"rho_window_flag", s.form.rhoWindowFlag()},
                 {"out", svOut}},
                "");
    } else if (nm->parsed()) {
      if (!(nmP >= 1.0)) throw UsageError("--p must be >= 1");
      if (!(nmYmax >= 1.0)) throw UsageError("--ymax must be >= 1");
      if (nmOrder < 2) throw UsageError("--order must be >= 2");
      if (nmDecompose && !(nmEps > 0.0 && nmEps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
      const MaassForm f = load_form(nmForm);
      const NormResult r = lp_integral(f, nmP, nmYmax, nmOrder);
      json j = {{"p", nmP},
                {"value", r.value},
                {"norm", std::pow(r.value, 1.0 / nmP)},
                {"tail_bound", r.tailBound},
                {"error", r.error},
                {"ymax", nmYmax}};
      if (nmDecompose) {
        json pieces = json::array();
        for (const RangePiece& p : range_decomposition(f, nmEps, nmYmax)) {
          pieces.push_back({{"label", p.label},
                            {"l", p.l},
                            {"u_lo", p.uLo},
                            {"u_hi", p.uHi},
                            {"contribution_l4", p.contributionL4}});
        }
        j["pieces"] = pieces;
      }
      emit_json(j, nmOut);
    } else if (sg->parsed() && sc->parsed()) {
      if (!(scA > 0.0)) throw UsageError("--a must be positive");
      if (!(scEps > 0.0 && scEps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
      if (!(scEps1 > 0.0 && scEps1 < scEps / 10.0)) throw UsageError("--eps1 must lie in (0, eps/10)");
      if (scM < 0.0) throw UsageError("--M must be nonnegative");
      const MaassForm f = load_form(scForm);
      const double M = scM > 0.0 ? scM : std::pow(f.t, 0.3);
      const HeightSelection sel = select_good_heights(f, scA, scEps, scEps1, M);
      std::string csv = "k,Y_k,count\n";
      for (const GoodHeight& g : sel.successes) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%lld\n", g.k, g.Y,
                      count_sign_changes(horocycle_segment(f, g.Y)));
        csv += buf;
      }
      emit(csv, scOut);
      std::fprintf(stderr, "%d of %d windows succeeded\n", static_cast<int>(sel.successes.size()),
                   sel.windows);
    } else if (sg->parsed()) {
      if (sgForm.empty()) throw UsageError("signs needs --form");
      if (sgSegment == "horocycle" && !(sgY > 0.0)) throw UsageError("--y must be positive");
      if (sgSegment != "horocycle" && !(sgA > 0.0 && sgH > 0.0)) {
        throw UsageError("--a and --h must be positive");
      }
      if (sgSegment == "axis" && sgCertify && !sgParams.assumeLindelof) {
        throw UsageError("axis certificates need --assume-lindelof");
      }
      if (!(sgParams.eps > 0.0 && sgParams.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
      if (!(sgParams.eps1 > 0.0)) throw UsageError("--eps1 must be positive");
      const MaassForm f = load_form(sgForm);
      SegmentFunction seg;
      json j = {{"segment", sgSegment}};
      if (sgSegment == "horocycle") {
        seg = horocycle_segment(f, sgY);
        j["y"] = sgY;
      } else {
        seg = sgSegment == "axis" ? axis_segment(f, sgA, sgH) : vertical_segment(f, sgX, sgA, sgH);
        if (sgSegment == "vertical") j["x"] = sgX;
        j["a"] = sgA;
        j["h"] = sgH;
      }
      if (sgCertify) {
        sgParams.omega = sgOmega;
        sgParams.N = sgBigN;
        const SignCertificate c = certify_sign_changes(f, seg, sgParams);
        j["direct_count"] = c.directCount;
        j["certificate"] = certificate_json(c.certificate);
      } else {
        j["direct_count"] = count_sign_changes(seg);
      }
      emit_json(j, sgOut);
    } else if (nd->parsed()) {
      const Rect rect = parse_rect(ndRect);
      if (ndRes < 10) throw UsageError("--res must be at least 10");
      const MaassForm f = load_form(ndForm);
      const NodalReport r = nodal_report(f, rect, ndRes);
      if (!ndCsv.empty()) {
        const SignGrid g = report_grid(f, rect, ndRes);
        std::string csv = "x,y,sign\n";
        char buf[96];
        for (int jy = 0; jy < g.ny; ++jy) {
          for (int ix = 0; ix < g.nx; ++ix) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d\n", g.x(ix), g.y(jy), g.at(ix, jy));
            csv += buf;
          }
        }
        write_file_atomic(ndCsv, csv);
      }
      emit_json({{"rect", {rect.x0, rect.x1, rect.y0, rect.y1}},
                 {"nx", r.nx},
                 {"ny", r.ny},
                 {"component_count", r.componentCount},
                 {"inert_lower_bound", r.inertLowerBound},
                 {"inert_locus", r.inertLocus},
                 {"courant_budget", r.courantBudget},
                 {"bs_ratio", r.bsRatio},
                 {"bs_target", r.bsTarget},
                 {"courant_ok", r.courantOk}},
                ndOut);
    } else if (st->parsed()) {
      AcceptanceOptions opts;
      opts.seed = stSeed;
      opts.only = stOnly;
      const AcceptanceReport report = run_acceptance(opts, [](const CriterionResult& r) {
        std::fprintf(stderr, "%s  (%.1f s)\n", report_line(r).c_str(), r.seconds);
      });
      emit(report.text(), stOut);
      return report.allPass() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
