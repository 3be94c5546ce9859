#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entangle/cli.hpp"

using namespace entangle;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "entangle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "entangle_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ClosedBound) {
  const Result r = run({"bound", "--dim", "4", "--mode", "closed"});
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["value"], "1/24");
  EXPECT_EQ(j["runConfig"]["subcommand"], "bound");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bound", "--dim", "2", "--mode", "closed"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bound", "--dim", "3", "--mode", "open"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sigma", "--dim", "3", "--alpha", "0.7"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"oracle", "--dim", "3", "--n", "4", "--histogram", "--char"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SigmaVerdicts) {
  Result r = run({"sigma", "--dim", "3", "--alpha", "0.4", "--no-timestamp"});
  EXPECT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "Proven");
  EXPECT_FALSE(j.contains("elapsedSeconds"));
  EXPECT_LT(j["threshold"].get<double>(), candidate_minimum(3, 0.4).value);
  r = run({"sigma", "--dim", "3", "--alpha", "0.4", "--threshold", "0.3"});
  EXPECT_EQ(r.code, cli::kExitFailed);
  EXPECT_TRUE(json::parse(r.out).contains("witness"));
  r = run({"sigma", "--dim", "3", "--node-budget", "5"});
  EXPECT_EQ(r.code, cli::kExitBudget);
}

TEST(Cli, DefaultThreshold) { EXPECT_EQ(cli::default_threshold(3, 0.5), next_down(0.24857770256)); }

TEST(Cli, OracleCsv) {
  Result r = run({"oracle", "--dim", "3", "--n", "3", "--histogram"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 8), "B,count\n");
  r = run({"oracle", "--dim", "3", "--n", "8", "--histogram", "--budget", "100"});
  EXPECT_EQ(r.code, cli::kExitBudget);
  r = run({"oracle", "--dim", "2", "--n", "3", "--char", "--r", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1,0,4\n"), std::string::npos);
}

TEST(Cli, SimulateWritesToOutDir) {
  const auto dir = temp_dir();
  setenv(cli::kOutDirVariable, dir.c_str(), 1);
  const Result r = run({"simulate", "--dim", "3", "--p", "0.05", "--trials", "500", "--r-max", "5", "--out", "t.csv",
                        "--fit", "1", "3"});
  unsetenv(cli::kOutDirVariable);
  EXPECT_EQ(r.code, 0);
  std::ifstream f(dir / "t.csv");
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "r,count,probability,ciLow,ciHigh");
  EXPECT_NE(r.err.find("log-slope"), std::string::npos);
}

TEST(Cli, SphereReport) {
  const auto dir = temp_dir();
  {
    std::ofstream f(dir / "k.txt");
    f << "0 0 0\n2 1 -1\n-1 0 2\n";
  }
  const Result r = run({"sphere", "--set", (dir / "k.txt").string(), "--obj", (dir / "k.obj").string()});
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["complex"]["eulerCharacteristic"], 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "k.obj"));
  EXPECT_EQ(run({"sphere", "--set", (dir / "missing.txt").string()}).code, cli::kExitUsage);
}
