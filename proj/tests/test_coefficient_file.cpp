#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "maasslab/coefficient_file.hpp"
#include "maasslab/eigensolver.hpp"
#include "maasslab/errors.hpp"

using namespace maasslab;
namespace fs = std::filesystem;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_form_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "maasslab-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("round trip through text") {
  const MaassForm f = make_form(13.779751351891, {{2, 1.549304}, {3, 0.246899}, {5, 0.737060}},
                                0.873, "even", 6);
  const MaassForm g = parse_form_string(format_form(f));
  CHECK(g.t == f.t);
  CHECK(g.rhoOne == f.rhoOne);
  CHECK(g.hecke.primeEigenvalues() == f.hecke.primeEigenvalues());
  CHECK(g.hecke(1) == 1.0);
  CHECK(g.hecke(6) == f.hecke(6));
}

TEST_CASE("malformed files report the offending line") {
  const std::string head = "t 13.5\nparity even\nrho1 1\n";
  CHECK(parse_error_line(head + "2 0.5\n2 0.6\n") == 5);
  CHECK(parse_error_line(head + "3 0.5\n2 0.6\n") == 5);
  CHECK(parse_error_line(head + "4 0.5\n") == 4);
  CHECK(parse_error_line(head + "2\n") == 4);
  CHECK(parse_error_line(head + "2 abc\n") == 4);
  CHECK(parse_error_line("t 13.5\nparity odd\nrho1 1\n") == 2);
  CHECK(parse_error_line("t 13.5\nparity even\n") == 3);
  CHECK(parse_error_line("") == 1);
}

TEST_CASE("ingest_form") {
  const fs::path ok = scratch("ok.coef");
  store_form(ok.string(), make_form(13.0, {{2, 0.5}, {3, -0.5}}, 1.0, "even", 3));
  const MaassForm f = ingest_form(ok.string());
  CHECK(f.hecke(1) == 1.0);
  CHECK_FALSE(f.softBoundFlag());

  const fs::path loud = scratch("loud.coef");
  {
    std::ofstream out(loud);
    out << "t 13.5\nparity even\nrho1 1\n2 10\n3 0.1\n";
  }
  CHECK(ingest_form(loud.string()).softBoundFlag());

  const fs::path dup = scratch("dup.coef");
  {
    std::ofstream out(dup);
    out << "t 13.5\nparity even\nrho1 1\n2 0.1\n2 0.1\n";
  }
  CHECK_THROWS_AS(ingest_form(dup.string()), ParseError);
  CHECK_THROWS(ingest_form(scratch("absent.coef").string()));
}

TEST_CASE("store_form into a missing directory fails without a partial file") {
  const fs::path bad = scratch("no-such-dir") / "x.coef";
  CHECK_THROWS(store_form(bad.string(), make_form(13.0, {{2, 0.5}}, 1.0, "even", 2)));
  CHECK_FALSE(fs::exists(bad));
}
