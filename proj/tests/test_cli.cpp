#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "maasslab/special.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MAASSLAB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "maasslab-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("kbessel --r 10 --u 5 --bogus").code == 2);
  CHECK(run("kbessel --u 5").code == 2);
  CHECK(run("kbessel --r 10 --u -1").code == 2);
  CHECK(run("nosuchcommand").code == 2);
}

TEST_CASE("kbessel prints JSON") {
  const Run r = run("kbessel --r 100 --u 50");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["regime"] == "oscillatory");
  CHECK(j["value"].get<double>() ==
        doctest::Approx(maasslab::scaled_K_oracle(100, 50)).epsilon(1e-3));
  const Run o = run("kbessel --r 0 --u 1 --oracle");
  REQUIRE(o.code == 0);
  CHECK(nlohmann::json::parse(o.out)["value"].get<double>() ==
        doctest::Approx(0.4210244382).epsilon(1e-9));
}

TEST_CASE("solve then norm") {
  const fs::path coef = scratch("first.coef");
  fs::remove(coef);
  REQUIRE(run("solve --t-min 13.7 --t-max 13.9 --out " + coef.string()).code == 0);
  REQUIRE(fs::exists(coef));
  const Run n = run("norm --form " + coef.string() + " --p 2");
  REQUIRE(n.code == 0);
  CHECK(nlohmann::json::parse(n.out)["norm"].get<double>() == doctest::Approx(1.0).epsilon(5e-2));

  const Run s = run("signs --form " + coef.string() + " --segment horocycle --y 1");
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["direct_count"].get<long long>() >= 4);

  const Run axis = run("signs --form " + coef.string() + " --segment axis --a 1 --h 1 --certify");
  CHECK(axis.code != 0);

  const Run nd = run("nodal --form " + coef.string() + " --rect=-0.5,0.5,1,2.5 --res 10");
  REQUIRE(nd.code == 0);
  CHECK(nlohmann::json::parse(nd.out).contains("component_count"));
}

TEST_CASE("missing coefficient file") {
  CHECK(run("norm --form " + scratch("absent.coef").string()).code == 1);
}
