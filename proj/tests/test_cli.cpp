#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "tangles/json_io.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TANGLE_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string w_state_path() {
  std::vector<tangles::cplx> amps(8, 0.0);
  amps[1] = amps[2] = amps[4] = 1.0 / std::sqrt(3.0);
  const tangles::Ket w = tangles::make_ket(3, amps);
  return write_temp("cli_w.json", tangles::ket_to_json(w).dump());
}

TEST(Cli, CheckFeasibleTuple) {
  const RunResult r = run_cli("check 0 0 0 1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("status").get<std::string>(), "feasible");
  EXPECT_NEAR(j.at("witness").at("r").get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j.at("achievability_margin").get<double>(), 0.0, 1e-12);
}

TEST(Cli, CheckInfeasibleTuple) {
  const RunResult r = run_cli("check 1 1 0 0");
  EXPECT_EQ(r.exit_code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("status").get<std::string>(), "infeasible");
  EXPECT_NEAR(j.at("achievability_margin").get<double>(), -1.0, 1e-12);
  EXPECT_TRUE(j.at("witness").is_null());
}

TEST(Cli, CheckBoundaryDegenerateTuple) {
  const RunResult r =
      run_cli("check 0.6666666666666666 0.6666666666666666 0.6666666666666666 0");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("status").get<std::string>(), "boundary-degenerate");
  EXPECT_TRUE(j.at("witness").is_null());
  EXPECT_NEAR(j.at("achievability_margin").get<double>(), 0.0, 1e-9);
}

TEST(Cli, InvertRoundTrip) {
  const RunResult r = run_cli("invert 0 0 0 1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("feasible").get<bool>());
  EXPECT_NEAR(j.at("r").get<double>(), 1.0, 1e-12);
  EXPECT_LT(j.at("roundtrip").at("max_error").get<double>(), 1e-9);

  EXPECT_EQ(run_cli("invert 1 1 0 0.1").exit_code, 1);
  EXPECT_EQ(run_cli("invert 0.1 0.1 0.1 0").exit_code, 2);
  EXPECT_EQ(run_cli("invert 1.5 0 0 0.5").exit_code, 2);
}

TEST(Cli, TanglesOfExplicitState) {
  const RunResult r = run_cli("tangles --state " + w_state_path());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("n").get<int>(), 3);
  EXPECT_NEAR(j.at("tuple").at("x").get<double>(), 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(j.at("tuple").at("t").get<double>(), 0.0, 1e-9);
  EXPECT_NEAR(j.at("one_tangles")[0].at("value").get<double>(), 2.0 * std::sqrt(2.0) / 3.0,
              1e-10);
  ASSERT_EQ(j.at("subset_tangles").size(), 4u);
  for (const json& entry : j.at("subset_tangles")) {
    const int mask = entry.at("mask").get<int>();
    if (mask == 7) {
      EXPECT_EQ(entry.at("kind").get<std::string>(), "pure");
      EXPECT_NEAR(entry.at("value").get<double>(), 0.0, 1e-9);
    } else {
      EXPECT_EQ(entry.at("kind").get<std::string>(), "mixed");
      EXPECT_NEAR(entry.at("value").get<double>(), 2.0 / 3.0, 1e-9);
    }
  }
}

TEST(Cli, GhzClosedForms) {
  tangles::GhzClassParams p;
  p.n = 3;
  p.r = 2.0;
  p.phis = {std::numbers::pi / 3, std::numbers::pi / 4, std::numbers::pi / 2};
  p.kappa = -1.0;
  const std::string path = write_temp("cli_params.json", tangles::params_to_json(p).dump());
  const RunResult r = run_cli("ghz --params " + path + " --state");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  double t_full = -1.0, x_pair = -1.0;
  for (const json& entry : j.at("subset_tangles")) {
    if (entry.at("mask").get<int>() == 7) t_full = entry.at("value").get<double>();
    if (entry.at("mask").get<int>() == 6) x_pair = entry.at("value").get<double>();
  }
  EXPECT_NEAR(t_full, std::sqrt(6.0) / 8.0, 1e-12);
  EXPECT_NEAR(x_pair, std::sqrt(2.0) / 8.0, 1e-12);
  for (const json& res : j.at("monogamy_residuals"))
    EXPECT_LT(res.get<double>(), 1e-12);
  EXPECT_EQ(j.at("state").at("n").get<int>(), 3);
}

TEST(Cli, SampleSuiteSummary) {
  const RunResult r = run_cli("sample --suite necessity --samples 2000 --workers 2 --seed 77");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("suite").get<std::string>(), "necessity");
  EXPECT_EQ(j.at("samples").get<int>(), 2000);
  EXPECT_EQ(j.at("seed").get<int>(), 77);
  EXPECT_EQ(j.at("violations").get<int>(), 0);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_LE(j.at("min_margin").get<double>(), j.at("max_margin").get<double>());
  EXPECT_EQ(j.at("worst").at("input").at("kind").get<std::string>(), "haar");
  EXPECT_EQ(j.at("worst").at("input").at("seed").get<int>(), 77);
}

TEST(Cli, MonogamySuite) {
  const RunResult r = run_cli("monogamy --n 4 --samples 200");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("suite").get<std::string>(), "strong-monogamy");
  EXPECT_EQ(j.at("n").get<int>(), 4);
  EXPECT_EQ(j.at("violations").get<int>(), 0);
}

TEST(Cli, SurfaceCsv) {
  const RunResult r = run_cli("surface --field steiner-convex --points 7");
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,y,z,t2,margin");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 7 * 7 * 7);

  const RunResult sliced = run_cli("surface --field achievability --points 5 --t2 0.5 --t2 0");
  std::istringstream sin(sliced.out);
  std::getline(sin, header);
  rows = 0;
  while (std::getline(sin, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 2 * 5 * 5 * 5);
}

TEST(Cli, RoofComparison) {
  const std::string path = write_temp(
      "cli_ghz3.json",
      tangles::ket_to_json(tangles::ghz_ket(3, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)))
          .dump());
  const RunResult r = run_cli("roof --state " + path + " --keep 0,1 --points2 241 --points3 9");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("k").get<int>(), 2);
  EXPECT_TRUE(j.at("agree").get<bool>());
  EXPECT_NEAR(j.at("spectral").at("convex").get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j.at("spectral").at("concave").get<double>(), 1.0, 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("sample --suite no-such-suite").exit_code, 2);
  EXPECT_EQ(run_cli("surface --field no-such-field").exit_code, 2);
  EXPECT_EQ(run_cli("check 2 0 0 1").exit_code, 2);
  EXPECT_EQ(run_cli("tangles --state /nonexistent.json").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("kchain --n 4").exit_code, 2);
  EXPECT_EQ(run_cli("sample --suite kchain --n 4").exit_code, 2);
}

TEST(Cli, HelpExitsCleanly) {
  EXPECT_EQ(run_cli("--help").exit_code, 0);
  EXPECT_EQ(run_cli("check --help").exit_code, 0);
}

}  // namespace
