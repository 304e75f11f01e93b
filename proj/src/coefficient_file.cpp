#include "maasslab/coefficient_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "maasslab/errors.hpp"

namespace maasslab {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(line, "expected a decimal number, got '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
  return v;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

std::string format_form(const MaassForm& form) {
  std::string out = "t " + fmt17(form.t) + "\nparity " + form.parity + "\nrho1 " +
                    fmt17(form.rhoOne) + "\n";
  for (const auto& [p, lam] : form.hecke.primeEigenvalues()) {
    out += std::to_string(p) + " " + fmt17(lam) + "\n";
  }
  return out;
}

void write_form(std::ostream& out, const MaassForm& form) { out << format_form(form); }

MaassForm parse_form(std::istream& in) {
  std::string line;
  int lineNo = 0;
  auto header = [&](const char* key) {
    if (!std::getline(in, line)) throw ParseError(lineNo + 1, std::string("missing '") + key + "' line");
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto w = split_ws(line);
    if (w.size() != 2 || w[0] != key) {
      throw ParseError(lineNo, std::string("expected '") + key + " <value>'");
    }
    return w[1];
  };
  const double t = parse_double(header("t"), 1);
  const std::string parity = header("parity");
  if (parity != "even") throw ParseError(2, "unsupported parity '" + parity + "'");
  const double rho1 = parse_double(header("rho1"), 3);
  if (!(t > 0.0)) throw ParseError(1, "t must be positive");
  if (!(rho1 > 0.0)) throw ParseError(3, "rho1 must be positive");

  std::map<int, double> primes;
  long long last = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto w = split_ws(line);
    if (w.empty()) continue;
    if (w.size() != 2) throw ParseError(lineNo, "expected '<prime> <eigenvalue>'");
    const long long p = parse_int(w[0], lineNo);
    if (!is_prime(p) || p > 100'000'000) throw ParseError(lineNo, w[0] + " is not a prime");
    if (p == last) throw ParseError(lineNo, "duplicate prime " + w[0]);
    if (p < last) throw ParseError(lineNo, "primes out of order at " + w[0]);
    last = p;
    primes[static_cast<int>(p)] = parse_double(w[1], lineNo);
  }

  int nMax = static_cast<int>(std::ceil(t)) + kTableMargin;
  for (int p : primes_up_to(nMax)) {
    if (!primes.count(p)) {
      nMax = p - 1;
      break;
    }
  }
  return make_form(t, primes, rho1, parity, std::max(nMax, 1));
}

MaassForm parse_form_string(const std::string& text) {
  std::istringstream in(text);
  return parse_form(in);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void store_form(const std::string& path, const MaassForm& form) {
  write_file_atomic(path, format_form(form));
}

MaassForm load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_form(in);
}

}  // namespace maasslab
