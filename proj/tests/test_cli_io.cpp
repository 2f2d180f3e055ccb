#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opk/algebra_io.hpp"

using namespace opk;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_cli(const std::string& args, const std::string& out_path) {
  std::string cmd = std::string(OPK_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("algebra documents round-trip through JSON") {
  LoadedAlgebra la = load_algebra_file(std::string(OPK_DATA_DIR) + "/algebras/com-free-line-w3.json");
  CHECK(la.name == "com-free-line-w3");
  CHECK(la.alg.carrier.space.dims == std::map<int, int>{{0, 3}});
  CHECK(la.alg.weight == 3);
  json again = save_algebra(la.name, la.alg, OperadKind::Com, 4);
  LoadedAlgebra back = load_algebra(again);
  CHECK(back.alg.mu == la.alg.mu);
  CHECK(back.alg.weights == la.alg.weights);
}

TEST_CASE("the loader rejects broken structure maps") {
  std::ifstream in(std::string(OPK_DATA_DIR) + "/algebras/com-square-zero.json");
  json j;
  in >> j;
  j["mu"]["2"]["0"][0][0] = "1";  // mu(x,x) = x + y
  CHECK_THROWS_AS(load_algebra(j), std::runtime_error);
  CHECK_NOTHROW(load_algebra(j, /*run_checks=*/false));
}

TEST_CASE("every bundled corpus entry loads and passes the axiom gate") {
  const char* names[] = {"com-free-line-w3",   "com-truncated-poly-x5", "com-trivial-odd",
                         "com-square-zero",    "ass-free-line-w2",      "ass-truncated-poly-x4",
                         "ass-trivial-odd",    "ass-square-zero",       "lie-free-odd-w2",
                         "lie-free-even",      "lie-trivial-odd"};
  for (const char* n : names) {
    LoadedAlgebra la =
        load_algebra_file(std::string(OPK_DATA_DIR) + "/algebras/" + n + ".json");
    CHECK(la.name == n);
    CHECK(la.alg.weights.size() == size_t(FlatBasis(la.alg.carrier.space).size()));
  }
}

TEST_CASE("CLI reports are byte-identical across reruns") {
  std::string a = "/tmp/opk_run_a.json", b = "/tmp/opk_run_b.json";
  CHECK(run_cli("bar --operad com --max-arity 4", a) == 0);
  CHECK(run_cli("bar --operad com --max-arity 4", b) == 0);
  std::string da = slurp(a), db = slurp(b);
  CHECK(!da.empty());
  CHECK(da == db);
  CHECK(run_cli("axioms --operad ass --max-arity 4 --cases 50 --seed 7", a) == 0);
  CHECK(run_cli("axioms --operad ass --max-arity 4 --cases 50 --seed 7", b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("CLI report schema") {
  std::string p = "/tmp/opk_schema.json";
  REQUIRE(run_cli("koszul-check --operad lie --max-arity 3", p) == 0);
  json j = json::parse(slurp(p));
  CHECK(j.at("schema_version") == "operadkit-report/1");
  CHECK(j.at("command") == "koszul-check");
  CHECK(j.at("config_echo").at("operad") == "lie");
  CHECK(j.at("timing").is_null());  // deterministic by default
  REQUIRE(j.at("results").is_array());
  REQUIRE(!j.at("results").empty());
  for (auto& r : j.at("results")) {
    CHECK(r.contains("name"));
    CHECK(r.contains("params"));
    CHECK(r.contains("expected"));
    CHECK(r.contains("got"));
    CHECK(r.at("pass").is_boolean());
  }
}

TEST_CASE("CLI exit codes: 0 pass, 1 failing assertion, 2 bad config") {
  std::string p = "/tmp/opk_exit.json";
  CHECK(run_cli("dims --operad ass --max-arity 3", p) == 0);
  // cap violation without the override flag
  CHECK(run_cli("dims --operad ass --max-arity 7", p) == 2);
  // unknown flag
  CHECK(run_cli("dims --no-such-flag", p) == 2);
  // missing file
  CHECK(run_cli("algebra --file /tmp/opk_missing.json", p) == 2);
  // a syntactically valid document whose axioms fail: exit 1 from `axioms`
  {
    std::ifstream in(std::string(OPK_DATA_DIR) + "/algebras/com-square-zero.json");
    json j;
    in >> j;
    j["mu"]["2"]["0"][0][0] = "1";
    std::ofstream out("/tmp/opk_bad_alg.json");
    out << j.dump();
  }
  CHECK(run_cli("axioms --file /tmp/opk_bad_alg.json", p) == 1);
  json rep = json::parse(slurp(p));
  bool has_fail = false;
  for (auto& r : rep.at("results")) has_fail = has_fail || !r.at("pass").get<bool>();
  CHECK(has_fail);
}

TEST_CASE("OPERADKIT_OUT sets the default output directory") {
  std::string dir = "/tmp/opk_outdir";
  std::system(("mkdir -p " + dir + " && rm -f " + dir + "/r.json").c_str());
  std::string cmd = std::string("OPERADKIT_OUT=") + dir + " " + OPK_CLI_PATH +
                    " dims --operad com --max-arity 2 --output r.json >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(!slurp(dir + "/r.json").empty());
}
