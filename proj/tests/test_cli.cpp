#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

std::string cli_path() {
  const char* env = std::getenv("NICF_CLI_PATH");
  if (env) return env;
#ifdef NICF_CLI_PATH
  return NICF_CLI_PATH;
#else
  return "./nicf";
#endif
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("expand emits the digit listing with the resolved config") {
  RunResult r = run_cli("expand --kind folded --x 0.4 --n 5");
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["command"] == "expand");
  CHECK(doc["config"]["kind"] == "folded");
  CHECK(doc["config"]["x"] == 0.4);
  CHECK(doc["config"]["seed"] == 20240917);
  CHECK(doc["result"]["terminated"] == true);
  REQUIRE(doc["result"]["digits"].size() == 2);
  CHECK(doc["result"]["digits"][0] == json::array({3, -1}));
  CHECK(doc["result"]["digits"][1] == json::array({2, 1}));

  RunResult odd = run_cli("expand --kind odd --x 0.302776 --n 2");
  REQUIRE(odd.code == 0);
  json odd_doc = json::parse(odd.out);
  CHECK(odd_doc["result"]["digits"] == json::array({3, 3}));

  RunResult csv = run_cli("expand --kind odd --x 0.302776 --n 2 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out == "index,b\n1,3\n2,3\n");
}

TEST_CASE("validation failures exit with code two and name the problem") {
  RunResult bad_x = run_cli("expand --kind folded --x 0.9 --n 3");
  CHECK(bad_x.code == 2);
  CHECK(bad_x.out.find("domain") != std::string::npos);

  CHECK(run_cli("decay --kind folded --n-max 0").code == 2);
  CHECK(run_cli("decay --kind hurwitz --n-max 5").code == 2);

  RunResult bad_word = run_cli("mixing --kind folded --e 0,0.25 --f 2,-1 --n 1");
  CHECK(bad_word.code == 2);
  CHECK(bad_word.out.find("a + e >= 2") != std::string::npos);

  CHECK(run_cli("expand --x 0.4").code == 2);         // missing --n
  CHECK(run_cli("nonsense --x 1").code == 2);         // unknown subcommand
  CHECK(run_cli("expand --bogus 1 --x 0.4 --n 1").code == 2);
  CHECK(run_cli("mixing --kind folded --e 0.25 --f 2,+1 --n 1").code == 2);
}

TEST_CASE("certification exit codes distinguish bound violations") {
  RunResult folded = run_cli("certify --family folded");
  REQUIRE(folded.code == 0);
  json doc = json::parse(folded.out);
  CHECK(doc["result"]["pass"] == true);
  CHECK(doc["result"]["combined"]["certified_sup"].get<double>() < 0.288);
  CHECK(doc["result"]["blocks"][0]["certified_sup"].get<double>() < 0.097);
  CHECK(doc["result"]["blocks"][1]["certified_sup"].get<double>() < 0.191);

  RunResult conj = run_cli("certify --family conjugate --report-components");
  CHECK(conj.code == 1);
  json conj_doc = json::parse(conj.out);
  CHECK(conj_doc["result"]["pass"] == false);
  double combined = conj_doc["result"]["combined"]["certified_sup"].get<double>();
  CHECK(combined > 0.234);
  CHECK(combined < 0.236);
  const json& second = conj_doc["result"]["blocks"][1];
  CHECK(second["stated_total"] == 0.092);
  CHECK(second["stated_total_proof"] == 0.0992);
  CHECK(second["note"].get<std::string>().find("exceeds both stated totals") !=
        std::string::npos);
}

TEST_CASE("decay output carries the error table in both formats") {
  RunResult csv = run_cli("decay --kind folded --n-max 6 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("n,error\n", 0) == 0);
  int rows = -1;  // header
  for (char ch : csv.out) rows += ch == '\n';
  CHECK(rows == 6);

  RunResult js = run_cli("decay --kind conjugate --n-max 6");
  REQUIRE(js.code == 0);
  json doc = json::parse(js.out);
  CHECK(doc["result"]["errors"].size() == 6);
  CHECK(doc["result"]["stated_rate"] == 0.234);
  CHECK(doc["result"]["verdict"] == true);
  double e1 = doc["result"]["errors"][0].get<double>();
  double e2 = doc["result"]["errors"][1].get<double>();
  CHECK(e2 < e1);
}

TEST_CASE("mixing gaps decay through the CSV interface") {
  RunResult r = run_cli(
      "mixing --kind folded --e 0,0.25 --f 2,+1 --n 1,6 --format csv");
  REQUIRE(r.code == 0);
  double g1 = 0.0, g6 = 0.0;
  REQUIRE(std::sscanf(r.out.c_str(), "n,gap\n1,%lf\n6,%lf", &g1, &g6) == 2);
  CHECK(g1 == doctest::Approx(9.4529e-3).epsilon(1e-3));
  CHECK(g6 < g1 * std::pow(0.288, 5) * 1.1);

  RunResult conj = run_cli(
      "mixing --kind conjugate --e -0.25,0.25 --f 2,+1 --n 1 --format csv");
  CHECK(conj.code == 0);

  RunResult odd = run_cli("mixing --kind odd --e -0.25,0.25 --f 3 --n 2 --format csv");
  CHECK(odd.code == 0);
  double og = -1.0;
  REQUIRE(std::sscanf(odd.out.c_str(), "n,gap\n2,%lf", &og) == 1);
  CHECK(og > 0.0);

  RunResult asym = run_cli("mixing --kind odd --e -0.1,0.3 --f 3 --n 2");
  CHECK(asym.code == 2);
  CHECK(asym.out.find("symmetric") != std::string::npos);
}

TEST_CASE("identical configuration gives byte-identical output") {
  RunResult a = run_cli("decay --kind folded --n-max 5");
  RunResult b = run_cli("decay --kind folded --n-max 5");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  RunResult c1 = run_cli("certify --family folded --spacing 0.001");
  RunResult c2 = run_cli("certify --family folded --spacing 0.001");
  CHECK(c1.out == c2.out);
}

TEST_CASE("config file fills parameters and flags take precedence") {
  std::string cfg = write_temp("nicf_cli_test.cfg",
                               "# test config\nkind=conjugate\nn-max=4\n"
                               "format=csv\nseed=111\n");
  RunResult from_cfg = run_cli("decay --config " + cfg);
  REQUIRE(from_cfg.code == 0);
  CHECK(from_cfg.out.rfind("n,error\n", 0) == 0);
  int rows = -1;
  for (char ch : from_cfg.out) rows += ch == '\n';
  CHECK(rows == 4);

  RunResult flag_wins = run_cli("decay --config " + cfg + " --n-max 2 --format json");
  REQUIRE(flag_wins.code == 0);
  json doc = json::parse(flag_wins.out);
  CHECK(doc["result"]["errors"].size() == 2);
  CHECK(doc["config"]["kind"] == "conjugate");
  CHECK(doc["config"]["seed"] == 111);

  setenv("NICF_SEED", "999", 1);
  RunResult env_seed = run_cli("expand --x 0.4 --n 2");
  json env_doc = json::parse(env_seed.out);
  CHECK(env_doc["config"]["seed"] == 999);
  RunResult cfg_beats_env = run_cli("expand --x 0.4 --n 2 --config " + cfg +
                                    " --format json");
  json cfg_doc = json::parse(cfg_beats_env.out);
  CHECK(cfg_doc["config"]["seed"] == 111);
  RunResult flag_beats_env = run_cli("expand --x 0.4 --n 2 --seed 5");
  json flag_doc = json::parse(flag_beats_env.out);
  CHECK(flag_doc["config"]["seed"] == 5);
  unsetenv("NICF_SEED");
}

TEST_CASE("output lands in a file when requested") {
  std::string path = "/tmp/nicf_cli_test_out.json";
  std::remove(path.c_str());
  RunResult r = run_cli("expand --kind folded --x 0.375 --n 3 --output " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  json doc = json::parse(in);
  CHECK(doc["command"] == "expand");
  CHECK(doc["config"]["output"] == path);
  std::remove(path.c_str());
}

TEST_CASE("help requests succeed") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("expand --help").code == 0);
}
