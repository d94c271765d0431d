#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "bohr/json_io.hpp"
#include "doctest.h"

using bohr::io::Json;

namespace {

// The test runner exports BOHRLIFT_CLI (see CMakeLists); the fallbacks
// cover running the test binary by hand from the repo root or build dir.
std::string cli_path() {
  if (const char* env = std::getenv("BOHRLIFT_CLI")) return env;
  for (const char* guess : {"build/bohrlift", "./bohrlift", "../bohrlift"}) {
    if (std::filesystem::exists(guess)) return guess;
  }
  return "bohrlift";
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd =
      (env.empty() ? "" : env + " ") + cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string fixture_path(const std::string& name, const std::string& bytes) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  bohr::io::write_file(path, bytes);
  return path;
}

Json parse_artifact(const std::string& text) { return Json::parse(text); }

}  // namespace

TEST_CASE("norm subcommand reports sqrt(5) for the two-term fixture") {
  const auto poly = fixture_path("bohrlift_cli_sqrt5.json",
                                 R"({"dirichlet": {"1": [1, 0], "2": [2, 0]}})");
  const auto run = run_cli("norm " + poly + " --p 2 --method parseval");
  REQUIRE(run.exit_code == 0);
  const Json j = parse_artifact(run.output);
  CHECK(j["value"].get<double>() == std::sqrt(5.0));
  CHECK(j["method"].get<std::string>() == "parseval");
  CHECK(j["seed"].get<std::uint64_t>() == 1);
  // The artifact carries the full 17-digit decimal.
  CHECK(run.output.find("2.2360679774997898") != std::string::npos);
  std::filesystem::remove(poly);
}

TEST_CASE("lp subcommand reports ratio one at p=2") {
  const auto poly = fixture_path("bohrlift_cli_lp.json",
                                 R"({"dirichlet": {"1": [1, 0], "2": [2, 0]}})");
  const auto run = run_cli("lp " + poly + " --eta 2 --p 2");
  REQUIRE(run.exit_code == 0);
  const Json j = parse_artifact(run.output);
  CHECK(std::abs(j["ratio"].get<double>() - 1.0) <= 1e-10);
  CHECK(j["eta"].get<std::string>() == "2");
  std::filesystem::remove(poly);
}

TEST_CASE("transfer forward fixture reports Q=10 and a=(7,11)") {
  const auto poly = fixture_path(
      "bohrlift_cli_transfer.json",
      R"({"dirichlet": {"1": [1, 0], "2": [0.5, 0], "3": [0.25, 0], "6": [0, 1]}})");
  const auto run = run_cli(
      "transfer --direction forward --Qmax 10 --symbol "
      "'{\"kind\":\"constant\",\"value\":1}' --poly " +
      poly + " --p 2 --epsilon 0.001");
  REQUIRE(run.exit_code == 0);
  const Json j = parse_artifact(run.output);
  CHECK(j["Q"].get<std::int64_t>() == 10);
  REQUIRE(j.contains("a"));
  CHECK(j["a"] == Json::array({7, 11}));
  CHECK(j["passed"].get<bool>());
  CHECK(j["sup_gap"].get<double>() == 0.0);
  std::filesystem::remove(poly);
}

TEST_CASE("selftest passes and its bytes are identical across runs") {
  const auto first = run_cli("selftest");
  REQUIRE(first.exit_code == 0);
  CHECK(first.output.find("[PASS] parseval_sqrt5_fixture") !=
        std::string::npos);
  CHECK(first.output.find("[FAIL]") == std::string::npos);
  const auto second = run_cli("selftest");
  REQUIRE(second.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("failure classes map to distinct exit codes") {
  // Malformed input: the file does not exist.
  const auto missing = run_cli("norm /nonexistent/bohrlift.json");
  CHECK(missing.exit_code == 2);
  CHECK(parse_artifact(missing.output)["error"]["kind"].get<std::string>() ==
        "malformed-input");

  const auto poly = fixture_path("bohrlift_cli_codes.json",
                                 R"({"dirichlet": {"1": [1, 0], "2": [2, 0]}})");

  // Unattainable tolerance: an indicator jump sits on the support, so no
  // continuous rational approximation can close the gap.
  const auto tol = run_cli(
      "transfer --direction forward --Qmax 1 --symbol "
      "'{\"kind\":\"indicator\",\"a\":0,\"b\":1,\"closed_right\":true}' "
      "--poly " +
      poly + " --epsilon 0.4");
  CHECK(tol.exit_code == 3);
  CHECK(parse_artifact(tol.output)["error"]["code"].get<int>() == 3);

  // Budget exhaustion: zero points leave nothing to sample.
  const auto budget = run_cli("norm " + poly + " --method grid --p 2.5 --budget 0");
  CHECK(budget.exit_code == 4);
  CHECK(parse_artifact(budget.output)["error"]["kind"].get<std::string>() ==
        "budget-exhausted");

  // Failed margin certificate: eta is a convergent of log 3, so the
  // lone frequency sits too close to a block threshold to classify.
  const auto three = fixture_path("bohrlift_cli_margin.json",
                                  R"({"dirichlet": {"3": [1, 0]}})");
  const auto margin = run_cli("lp " + three + " --eta 24621/22411 --p 2");
  CHECK(margin.exit_code == 5);
  CHECK(parse_artifact(margin.output)["error"]["kind"].get<std::string>() ==
        "numeric-certification");

  std::filesystem::remove(poly);
  std::filesystem::remove(three);
}

TEST_CASE("config file values override command-line flags") {
  const auto poly = fixture_path("bohrlift_cli_cfg_poly.json",
                                 R"({"dirichlet": {"1": [1, 0], "2": [2, 0]}})");
  const auto cfg =
      fixture_path("bohrlift_cli_cfg.json", R"({"p": 4, "method": "even"})");
  const auto run =
      run_cli("norm " + poly + " --p 2 --method parseval --config " + cfg);
  REQUIRE(run.exit_code == 0);
  const Json j = parse_artifact(run.output);
  CHECK(j["p"].get<double>() == 4.0);
  CHECK(j["method"].get<std::string>() == "even_exact");
  // ||1 + 2*2^{-s}||_4^4 = ||(1+2z)^2||_2^2 = 1 + 16 + 16 = 33.
  CHECK(j["value"].get<double>() == std::pow(33.0, 0.25));

  const auto bad =
      fixture_path("bohrlift_cli_cfg_bad.json", R"({"unknown-key": 1})");
  CHECK(run_cli("norm " + poly + " --config " + bad).exit_code == 2);

  std::filesystem::remove(poly);
  std::filesystem::remove(cfg);
  std::filesystem::remove(bad);
}

TEST_CASE("environment variable supplies the default seed") {
  const auto poly = fixture_path("bohrlift_cli_env.json",
                                 R"({"dirichlet": {"1": [1, 0]}})");
  const auto run =
      run_cli("norm " + poly + " --method parseval", "BOHRLIFT_SEED=77");
  REQUIRE(run.exit_code == 0);
  CHECK(parse_artifact(run.output)["seed"].get<std::uint64_t>() == 77);
  std::filesystem::remove(poly);
}

TEST_CASE("bench emits a CSV schedule ending at the identity ratio") {
  const auto run =
      run_cli("proj --op bench --N-schedule 1,2,4 --p 2 --ensemble-size 4");
  REQUIRE(run.exit_code == 0);
  REQUIRE(run.output.rfind("N,max_ratio,argmax_member\n", 0) == 0);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < run.output.size()) {
    const auto next = run.output.find('\n', pos);
    lines.push_back(run.output.substr(pos, next - pos));
    pos = next + 1;
  }
  REQUIRE(lines.size() == 4);
  CHECK(lines[1].rfind("1,", 0) == 0);
  CHECK(lines[3].rfind("4,1,", 0) == 0);  // full truncation: ratio exactly 1
}

TEST_CASE("artifacts route to --out and leave stdout quiet") {
  const auto poly = fixture_path("bohrlift_cli_out.json",
                                 R"({"dirichlet": {"1": [1, 0], "2": [2, 0]}})");
  const auto out =
      (std::filesystem::temp_directory_path() / "bohrlift_cli_artifact.json")
          .string();
  const auto run =
      run_cli("norm " + poly + " --method parseval --out " + out);
  REQUIRE(run.exit_code == 0);
  CHECK(run.output.empty());
  const Json j = Json::parse(bohr::io::read_file(out));
  CHECK(j["value"].get<double>() == std::sqrt(5.0));
  std::filesystem::remove(poly);
  std::filesystem::remove(out);
}

TEST_CASE("proj identity-check artifact carries an exact pass") {
  const auto poly = fixture_path(
      "bohrlift_cli_schauder.json",
      R"({"dirichlet": {"1": [1, 0], "2": [1, 0], "3": [1, 0]}})");
  const auto run = run_cli("proj --op identity-check --N 2 " + poly);
  REQUIRE(run.exit_code == 0);
  const Json j = parse_artifact(run.output);
  CHECK(j["passed"].get<bool>());
  CHECK(j["max_deviation"].get<double>() == 0.0);
  CHECK(j["N"].get<std::uint64_t>() == 2);
  std::filesystem::remove(poly);
}
