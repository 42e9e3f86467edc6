#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "modspec/serialize.hpp"

using namespace modspec;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MODSPEC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "modspec_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("diag on diag(3,1) over C") {
  const auto path = scratch() / "k.json";
  write_text_file(path.string(),
                  R"({"shape": {"dims": [1]}, "n": 2, "blocks": [[[[3, 0], [0, 0]], [[0, 0], [1, 0]]]]})");
  const auto r = run("diag --input " + path.string());
  REQUIRE(r.status == 0);
  const auto j = parse_json(r.out);
  CHECK(j["margins"][0][0].get<double>() == doctest::Approx(2.0));
  CHECK(j["eigenvalues"][0]["blocks"][0][0][0][0].get<double>() == doctest::Approx(3.0));
  CHECK(j["eigenvalues"][1]["blocks"][0][0][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["config"]["command"] == "diag");
}

TEST_CASE("harper q=2 top band") {
  const auto path = scratch() / "bands.csv";
  REQUIRE(run("harper --p 1 --q 2 --grid 64 --output " + path.string()).status == 0);
  const auto csv = read_text_file(path.string());
  CHECK(csv.find("\n0,0,0,2.8284271247461") != std::string::npos);
  const auto report = read_json_file(path.string() + ".report.json");
  CHECK(report["continuity_ok"].get<bool>());
  CHECK(report["config"]["grid"] == 64);
}

TEST_CASE("gen is deterministic and feeds diag") {
  const auto a = run("gen --seed 5 --n 3 --dims 2,1 --weights 1,3");
  const auto b = run("gen --seed 5 --n 3 --dims 2,1 --weights 1,3");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run("gen --seed 6 --n 3 --dims 2,1 --weights 1,3").out);
  const auto path = scratch() / "gen.json";
  write_text_file(path.string(), a.out);
  CHECK(run("diag --input " + path.string()).status == 0);
  CHECK(run("weakdiag --iters 8 --input " + path.string()).status == 0);
  CHECK(run("perturb --eps 0.001 --input " + path.string()).status == 0);
  CHECK(run("perturb --input " + path.string() + " --input " + path.string()).status == 0);
  const auto csv = scratch() / "scale.csv";
  CHECK(run("scale --input " + path.string() + " --output " + csv.string()).status == 0);
  CHECK(fs::exists(csv.string() + ".config.json"));
}

TEST_CASE("exit codes") {
  CHECK(run("diag --no-such-flag").status == 2);
  CHECK(run("").status == 2);
  const auto bad = scratch() / "bad.json";
  write_text_file(bad.string(), "{\"shape\": ");
  CHECK(run("diag --input " + bad.string()).status == 2);
  const auto singular = scratch() / "singular.json";
  write_text_file(singular.string(), R"({"shape": {"dims": [1]}, "n": 2, "blocks": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]})");
  CHECK(run("diag --input " + singular.string()).status == 1);
  CHECK(run("harper --p 2 --q 4 --output " + (scratch() / "x.csv").string()).status == 1);
  CHECK(run("weakdiag --iters 0").status == 1);
}

TEST_CASE("butterfly writes CSV plus config sidecar") {
  const auto path = scratch() / "bf.csv";
  REQUIRE(run("butterfly --qmax 4 --grid 8 --output " + path.string()).status == 0);
  CHECK(read_text_file(path.string()).rfind("p,q,value\n", 0) == 0);
  CHECK(read_json_file(path.string() + ".config.json")["qmax"] == 4);
}
