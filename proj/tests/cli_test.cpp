// Integration tests that drive the qgame binary end to end.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / ("qgame_out_" + std::to_string(++counter));
  const auto err_path = dir / ("qgame_err_" + std::to_string(counter));
  const std::string cmd = std::string(QGAME_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

std::string case_path(const std::string& name) {
  return std::string(QGAME_CASES_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("version and help") {
  const CliResult v = run_cli("--version");
  REQUIRE(v.status == 0);
  REQUIRE(v.out.find("qgame") != std::string::npos);
  REQUIRE(run_cli("--help").status == 0);
  REQUIRE(run_cli("nash --help").status == 0);
}

TEST_CASE("usage errors exit with 2") {
  REQUIRE(run_cli("").status == 2);
  REQUIRE(run_cli("frobnicate").status == 2);
  REQUIRE(run_cli("nash --spec x.json --bogus-flag").status == 2);
  // both or neither of --spec/--coeffs
  REQUIRE(run_cli("nash").status == 2);
  REQUIRE(run_cli("nash --spec " + case_path("case1.json") +
                  " --coeffs 1,2,3,4")
              .status == 2);
}

TEST_CASE("nash on the bundled cases") {
  const CliResult r1 = run_cli("nash --spec " + case_path("case1.json"));
  REQUIRE(r1.status == 0);
  const json j1 = json::parse(r1.out);
  REQUIRE(j1["equilibria"].size() == 1);
  REQUIRE(std::abs(j1["equilibria"][0]["alpha"].get<double>() - 0.3927) <=
          0.002);
  REQUIRE(std::abs(j1["equilibria"][0]["beta"].get<double>() - 0.3927) <=
          0.002);
  REQUIRE(std::abs(j1["equilibria"][0]["value"].get<double>() - 2.0) <= 0.01);
  REQUIRE(j1["equilibria"][0]["kind"] == "interior_saddle");
  REQUIRE(j1["schema_version"] == 1);
  REQUIRE(j1["spec_digest"].is_string());

  const CliResult r2 = run_cli("nash --spec " + case_path("case2.json"));
  REQUIRE(r2.status == 0);
  REQUIRE(json::parse(r2.out)["equilibria"].empty());

  const CliResult r3 = run_cli("nash --coeffs 1,10,-6,4");
  REQUIRE(r3.status == 0);
  const json j3 = json::parse(r3.out);
  REQUIRE(j3["equilibria"].size() == 1);
  REQUIRE(std::abs(j3["equilibria"][0]["alpha"].get<double>() -
                   87.9 * 3.14159265 / 180.0) <= 0.01);
}

TEST_CASE("eval with degree conversion") {
  const CliResult r = run_cli("eval --spec " + case_path("case1.json") +
                              " --alice 22.5,0 --bob 22.5,0 --degrees");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  REQUIRE(std::abs(j["alpha"].get<double>() - 0.39269908) <= 1e-6);
  REQUIRE(std::abs(j["e_a"].get<double>() - 2.0) <= 1e-9);
  REQUIRE(std::abs(j["e_a_closed"].get<double>() - 2.0) <= 1e-9);
  REQUIRE(j["units"] == "currency");
}

TEST_CASE("lattice report lists the signature violation") {
  const CliResult r = run_cli("lattice --pairs 2");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["atoms"] == 4);
  REQUIRE(j["violation_count"].get<int>() > 0);
  bool found = false;
  for (const auto& v : j["violations"])
    if (v == json::array({"1", "2", "4"})) found = true;
  REQUIRE(found);
  REQUIRE(j["boolean_blocks"].size() == 2);
  REQUIRE(j["boolean_blocks"][0] == json::array({"O", "1", "3", "I"}));

  REQUIRE(run_cli("lattice --pairs 1").status == 4);
}

TEST_CASE("uncertainty at the equality point") {
  const CliResult r = run_cli("uncertainty --alpha 45 --theta 90 --degrees");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  REQUIRE(std::abs(j["d1"].get<double>() - 1.0) <= 1e-12);
  REQUIRE(std::abs(j["d2"].get<double>() - 1.0) <= 1e-12);
  REQUIRE(std::abs(j["e3"].get<double>() - 1.0) <= 1e-12);
  REQUIRE(j["lhs"].get<double>() >= j["rhs"].get<double>() - 1e-12);
  REQUIRE(j["holds"] == true);
}

TEST_CASE("interference command and domain errors") {
  const CliResult ok = run_cli("interference --alpha 0.3 --obs-angle 0.5");
  REQUIRE(ok.status == 0);
  const json j = json::parse(ok.out);
  REQUIRE(j["p2_residual"].get<double>() <= 1e-12);
  // alpha outside [0, pi/2] is a module domain error: exit 4
  REQUIRE(run_cli("interference --alpha 2.0 --obs-angle 0.5").status == 4);
}

TEST_CASE("spec file errors map to exit codes") {
  REQUIRE(run_cli("nash --spec /does/not/exist.json").status == 2);

  const auto bad = std::filesystem::temp_directory_path() / "qgame_bad.json";
  std::ofstream(bad) << "{ \"pairs\": 3, ";
  const CliResult parse = run_cli("nash --spec " + bad.string());
  REQUIRE(parse.status == 2);
  REQUIRE(parse.err.find("line") != std::string::npos);

  const auto mismatch =
      std::filesystem::temp_directory_path() / "qgame_mismatch.json";
  std::ofstream(mismatch) << R"({"pairs": 2,
    "frame_a": {"kind": "fixed_xyz"}, "frame_b": {"kind": "fixed_xyz"},
    "payoff": {"diag": [1,1,1,1]}})";
  const CliResult spec = run_cli("nash --spec " + mismatch.string());
  REQUIRE(spec.status == 3);
  REQUIRE(spec.err.find("frame_a.kind") != std::string::npos);
}

TEST_CASE("react writes the curve CSV") {
  const auto out = std::filesystem::temp_directory_path() / "qgame_curves.csv";
  const CliResult r = run_cli("react --coeffs 7,1,-2,1.5 --grid 0.05 --out " +
                              out.string());
  REQUIRE(r.status == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  REQUIRE(header == "player,opponent_angle,best_response,payoff");
  int alice_rows = 0, bob_rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("alice,", 0) == 0) ++alice_rows;
    if (line.rfind("bob,", 0) == 0) ++bob_rows;
  }
  REQUIRE(alice_rows == 63);  // ceil(pi / 0.05)
  REQUIRE(bob_rows == 63);
  std::filesystem::remove(out);
}

TEST_CASE("simulate requires a seed and is byte-deterministic") {
  const std::string base = "simulate --spec " + case_path("case1.json") +
                           " --alice 0.3926990816987241,0 "
                           "--bob 0.3926990816987241,0 "
                           "--prep-rounds 50000 --meas-rounds 50000";
  REQUIRE(run_cli(base).status == 2);  // no seed

  const CliResult a = run_cli(base + " --seed 42");
  const CliResult b = run_cli(base + " --seed 42");
  const CliResult c = run_cli(base + " --seed 42 --workers 3");
  REQUIRE(a.status == 0);
  REQUIRE(a.out == b.out);
  REQUIRE(a.out == c.out);

  const CliResult d = run_cli(base + " --seed 43");
  REQUIRE(d.status == 0);
  REQUIRE(d.out != a.out);

  const json j = json::parse(a.out);
  REQUIRE(std::abs(j["measurement"]["theoretical"].get<double>() - 2.0) <=
          1e-9);
  REQUIRE(std::abs(j["measurement"]["pooled_empirical"].get<double>() - 2.0) <=
          4.0 * j["measurement"]["total_std_error"].get<double>());

  // CSV flavor is deterministic too
  const CliResult csv1 = run_cli(base + " --seed 42 --csv");
  const CliResult csv2 = run_cli(base + " --seed 42 --csv");
  REQUIRE(csv1.status == 0);
  REQUIRE(csv1.out == csv2.out);
  REQUIRE(csv1.out.rfind("section,key,value", 0) == 0);
}

TEST_CASE("complex equilibrium search through the CLI") {
  const CliResult r =
      run_cli("nash --spec " + case_path("case1.json") + " --complex");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  REQUIRE_FALSE(j["complex_equilibria"].empty());
  bool found = false;
  for (const auto& e : j["complex_equilibria"])
    if (std::abs(e["value"].get<double>() - 2.0) <= 1e-6) found = true;
  REQUIRE(found);
}
