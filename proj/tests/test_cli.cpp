#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tauttwist/cli.hpp"
#include "tauttwist/json_io.hpp"

using namespace tauttwist;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("stargraphs text table carries the golden coefficients") {
  const CliResult r = run({"stargraphs", "--g", "2", "--k", "2", "--mu", "3,1",
                           "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("coeff 3/1") != std::string::npos);
  CHECK(r.out.find("coeff 1/2") != std::string::npos);
  CHECK(r.out.find("-(6)->") != std::string::npos);
  CHECK(r.out.find("[Hbar^1_2(2)]") != std::string::npos);
  CHECK(r.out.find("[Hbar^2_1(3,1,-4)]") != std::string::npos);
}

TEST_CASE("output is a pure function of the invocation") {
  const std::vector<std::string> args{"pixton", "--g", "1", "--k",
                                      "2",      "--mu", "1,-1"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("pixton json reports class and interpolation data") {
  const CliResult r = run({"pixton", "--g", "0", "--k", "1", "--mu",
                           "-1,-1,0", "--degree", "0"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("class").at("terms").size() == 1);
  CHECK(j.at("class").at("terms")[0].at("coeff") == "1/1");
  CHECK(j.at("interpolation").at("degree_bound") == 0);
}

TEST_CASE("verify commands exit by verification status") {
  CHECK(run({"verify-g1", "--mu", "1,-1", "--k-list", "1,2,3"}).code == 0);
  CHECK(run({"verify-g0", "--mu", "-2,-1,-1", "--k", "2"}).code == 0);
}

TEST_CASE("conjecture-gap exits zero when the reduced gap vanishes") {
  const CliResult r = run({"conjecture-gap", "--g", "1", "--k", "2", "--mu",
                           "0,0", "--mode", "Aprime"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("status") == "pass");
  CHECK(j.at("fully_tautological") == true);
}

TEST_CASE("twists subcommand reads the graph wire format") {
  const std::string path = "cli_twists_graph.json";
  {
    std::ofstream f(path);
    f << R"({"graph":{"vertices":[{"genus":0},{"genus":2}],)"
      << R"("legs":[{"marking":1,"vertex":0},{"marking":2,"vertex":0}],)"
      << R"("edges":[[{"vertex":0},{"vertex":1}]]},"center":0})";
  }
  const CliResult r = run({"twists", "--g", "2", "--k", "2", "--mu", "3,1",
                           "--graph", path});
  std::remove(path.c_str());
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j.at("twists").size() == 1);
  CHECK(j.at("twists")[0].at("I") == Json::array({6}));
  CHECK(j.at("twists")[0].at("coefficient") == "3/1");
}

TEST_CASE("registry-validate accepts the shipped file and needs a path") {
  const CliResult ok = run({"registry-validate", "--registry",
                            std::string(TAUTTWIST_DATA_DIR) +
                                "/registry_genus2.json"});
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out).at("status") == "ok");
  // malformed file
  const std::string bad = "cli_bad_registry.json";
  {
    std::ofstream f(bad);
    f << R"({"entries":[{"key":{"kind":"Hbar","g":2,"k":1,"sig":[2]},)"
      << R"("expansion":{"space":{"g":1,"n":1},"terms":[]},"provenance":""}]})";
  }
  const CliResult fail = run({"registry-validate", "--registry", bad});
  std::remove(bad.c_str());
  CHECK(fail.code != 0);
}

TEST_CASE("validation failures exit 2 with a machine-readable error") {
  const CliResult r =
      run({"pixton", "--g", "0", "--k", "1", "--mu", "-1,-1"});
  CHECK(r.code == 2);  // (0,2) is unstable
  const Json j = Json::parse(r.out);
  CHECK(j.contains("error"));
}

TEST_CASE("probe command reports the delta_irr constant") {
  const CliResult r = run({"probe-delta-irr", "--k", "2", "--mu", "1,-1"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("stratum_coefficient") == "-1/12");
  CHECK(j.at("pinned_form_delta_irr") == "-1/6");
  CHECK(j.at("internally_consistent") == true);
}

TEST_CASE("hclass applies the registry") {
  // without a registry the trivial-graph symbol survives
  const CliResult plain =
      run({"hclass", "--g", "2", "--k", "2", "--mu", "3,1"});
  CHECK(plain.code == 0);
  CHECK(Json::parse(plain.out).at("terms").size() == 5);
  // the shipped registry empties the trivial term and expands the
  // Weierstrass-type divisor into four strata terms
  const CliResult expanded =
      run({"hclass", "--g", "2", "--k", "2", "--mu", "3,1", "--registry",
           std::string(TAUTTWIST_DATA_DIR) + "/registry_genus2.json"});
  CHECK(expanded.code == 0);
  const Json j = Json::parse(expanded.out);
  CHECK(j.at("terms").size() == 7);
  CHECK(expanded.out.find("\"k\": 2") == std::string::npos);
}
