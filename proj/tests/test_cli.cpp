#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"

using namespace loggas;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("loggas_test_" + name);
  fs::remove_all(dir);
  return dir;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cli, EnsembleNames) {
  cli::RunConfig c;
  const std::pair<const char*, std::pair<int, double>> rows[] = {
      {"real-symmetric", {1, 1.0}}, {"complex-hermitian", {1, 2.0}}, {"quaternion-hermitian", {1, 4.0}},
      {"real", {2, 1.0}},           {"complex", {2, 2.0}},           {"quaternion", {2, 4.0}}};
  for (const auto& [name, ab] : rows) {
    c.ensemble = name;
    const auto s = cli::make_spec(c, 5);
    EXPECT_EQ(s.a(), ab.first) << name;
    EXPECT_EQ(s.b(), ab.second) << name;
    EXPECT_EQ(s.n(), 5);
  }
  c.raw = {1, 3.0, 0.5};
  const auto s = cli::make_spec(c, 4);
  EXPECT_EQ(s.b(), 3.0);
  EXPECT_EQ(s.c(), 0.5);
  c.raw = {3, 1, 0};
  EXPECT_THROW(cli::make_spec(c, 4), std::invalid_argument);
  c.raw.clear();
  c.ensemble = "octonion";
  EXPECT_THROW(cli::make_spec(c, 4), std::invalid_argument);
}

TEST(Cli, ConfigRoundTrip) {
  cli::RunConfig c;
  c.subcommand = "verify";
  c.target = "volume";
  c.n = {4, 8};
  c.p = 3.5;
  c.seed = 42;
  c.tol = 0.1;
  c.raw = {2, 2, 1};
  const auto back = cli::config_from_json(cli::to_json(c));
  EXPECT_EQ(back.subcommand, "verify");
  EXPECT_EQ(back.target, "volume");
  EXPECT_EQ(back.n, c.n);
  EXPECT_EQ(back.p, 3.5);
  EXPECT_EQ(back.seed, 42u);
  ASSERT_TRUE(back.tol.has_value());
  EXPECT_EQ(*back.tol, 0.1);
  EXPECT_EQ(back.raw, c.raw);
  // An artifact with the config nested under "config" replays too.
  const auto nested = cli::config_from_json(nlohmann::json{{"config", cli::to_json(c)}, {"pass", true}});
  EXPECT_EQ(nested.n, c.n);
}

TEST(Cli, EquilibriumArtifacts) {
  const auto dir = scratch_dir("equilibrium");
  cli::RunConfig c;
  c.subcommand = "equilibrium";
  c.p = 2.0;
  c.grid = 64;
  c.out_dir = dir.string();
  std::ostringstream log;
  ASSERT_EQ(cli::run(c, log), 0);
  ASSERT_TRUE(fs::exists(dir / "equilibrium.csv"));
  const auto j = read_json(dir / "equilibrium.json");
  EXPECT_EQ(j["config"]["p"], 2.0);
  EXPECT_EQ(j["version"], cli::version());
  std::ifstream csv(dir / "equilibrium.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "x,density");
  fs::remove_all(dir);
}

TEST(Cli, SampleSingleParticle) {
  const auto dir = scratch_dir("sample");
  cli::RunConfig c;
  c.subcommand = "sample";
  c.raw = {1, 1, 0};
  c.n = {1};
  c.p = 2.0;
  c.sweeps = 20'000;
  c.burn_in = 2'000;
  c.out_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(c, log), 0);
  EXPECT_TRUE(fs::exists(dir / "sample_trace.csv"));
  EXPECT_TRUE(fs::exists(dir / "sample.json"));
  fs::remove_all(dir);
}

TEST(Cli, Errors) {
  cli::RunConfig c;
  std::ostringstream log;
  c.subcommand = "nonsense";
  c.out_dir = scratch_dir("errors").string();
  EXPECT_THROW(cli::run(c, log), std::invalid_argument);
  c.subcommand = "verify";
  c.target = "nonsense";
  EXPECT_THROW(cli::run(c, log), std::invalid_argument);
  c.subcommand = "equilibrium";
  c.out_dir = "/proc/loggas_cannot_write";
  EXPECT_THROW(cli::run(c, log), std::runtime_error);
  fs::remove_all(scratch_dir("errors"));
}
