#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spinergo/errors.hpp"
#include "spinergo/sweep.hpp"

using namespace spinergo;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# minimal ergodicity run
geometry = ring
dims = [8]
gamma = 0.8
delta = 0.2
a = 0.6
jalpha = 20
measures = [discord]
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spinergo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small, fast variant of the minimal config.
std::string quick_config(const std::string& extra = "") {
  return std::string(R"(geometry = ring
dims = [4]
gamma = 0.8
delta = 0.2
a = 0.6
jalpha = 20
measures = [log_negativity, discord]
t_max = 20
t_large = 10
window = 10
beta_points = 6
)") + extra;
}

}  // namespace

TEST(Config, MinimalConfig) {
  const RunConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.geometry, Geometry::Ring);
  EXPECT_EQ(cfg.dims, std::vector<int>{8});
  EXPECT_EQ(cfg.gamma, std::vector<double>{0.8});
  EXPECT_EQ(cfg.delta, std::vector<double>{0.2});
  EXPECT_EQ(cfg.a, std::vector<double>{0.6});
  EXPECT_EQ(cfg.jalpha, 20.0);
  EXPECT_EQ(cfg.measures, std::vector<Measure>{Measure::Discord});
  EXPECT_EQ(cfg.protocol.time.t_max, 200.0);
  EXPECT_EQ(cfg.protocol.zero_threshold, 1e-4);
  EXPECT_TRUE(cfg.defaulted.count("t_max"));
  EXPECT_FALSE(cfg.defaulted.count("gamma"));
}

TEST(Config, RangeSweep) {
  std::string text = kMinimal;
  text.replace(text.find("delta = 0.2"), 11, "delta = [0.05, 1.5] step 0.05");
  const RunConfig cfg = parse_config(text);
  ASSERT_EQ(cfg.delta.size(), 30u);
  EXPECT_DOUBLE_EQ(cfg.delta.front(), 0.05);
  EXPECT_DOUBLE_EQ(cfg.delta.back(), 1.5);
  EXPECT_DOUBLE_EQ(cfg.delta[2], 0.15);
}

TEST(Config, Errors) {
  std::string unknown_measure = kMinimal;
  unknown_measure.replace(unknown_measure.find("[discord]"), 9, "[frobnicate]");
  try {
    parse_config(unknown_measure);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("measures"), std::string::npos);
    EXPECT_EQ(e.line(), 8);
  }
  try {
    parse_config(std::string(kMinimal) + "colour = blue\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 9);
  }
  EXPECT_THROW(parse_config(std::string(kMinimal) + "gamma = 0.4\n"), ConfigError);
  EXPECT_THROW(parse_config("geometry = ring\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "t_step = 0\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "this line has no equals\n"), ConfigError);
}

TEST(Sweep, ScalarConfigGivesOneRowPerMeasure) {
  const fs::path dir = scratch("scalar");
  const RunConfig cfg = parse_config(quick_config());
  const SweepOutput out = run_sweep(cfg, Subcommand::Ergodicity, dir, 2);
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.rows[0].measure, Measure::LogNegativity);
  EXPECT_EQ(out.rows[1].measure, Measure::Discord);
  for (const auto& r : out.rows) EXPECT_EQ(r.score, std::max(0.0, r.q_time_avg - r.q_can_max));
  const std::string csv = slurp(dir / "spin_ergo.csv");
  EXPECT_EQ(csv.rfind("# spin-ergo ergodicity csv v1\n", 0), 0u);
  EXPECT_NE(csv.find(csv_header(Subcommand::Ergodicity)), std::string::npos);
}

TEST(Sweep, RerunIsByteIdentical) {
  std::string text = quick_config();
  text.replace(text.find("delta = 0.2\n"), 12, "delta = [0.2, 0.4] step 0.2\n");
  const RunConfig cfg = parse_config(text);
  const fs::path one = scratch("rerun1"), two = scratch("rerun2");
  run_sweep(cfg, Subcommand::Ergodicity, one, 1);
  run_sweep(cfg, Subcommand::Ergodicity, two, 3);
  EXPECT_EQ(slurp(one / "spin_ergo.csv"), slurp(two / "spin_ergo.csv"));
  EXPECT_EQ(slurp(one / "spin_ergo_manifest.json"), slurp(two / "spin_ergo_manifest.json"));
}

TEST(Sweep, ManifestRecordsDefaults) {
  const fs::path dir = scratch("manifest");
  const RunConfig cfg = parse_config(quick_config());
  run_sweep(cfg, Subcommand::Ergodicity, dir, 1);
  const auto m = nlohmann::json::parse(slurp(dir / "spin_ergo_manifest.json"));
  std::set<std::string> listed = m.at("defaulted_keys").get<std::set<std::string>>();
  EXPECT_EQ(listed, cfg.defaulted);
  for (const char* key : {"t_step", "window_only", "zero_threshold", "opt_grid_theta", "discord_side"})
    EXPECT_TRUE(listed.count(key)) << key;
  EXPECT_EQ(m.at("time_protocol").at("t_step"), 0.1);
  EXPECT_EQ(m.at("beta_grid").at("values").size(), cfg.protocol.beta.values(20.0).size());
  EXPECT_EQ(m.at("optimizer").at("grid_theta"), 65);
  EXPECT_EQ(m.at("zero_threshold"), 1e-4);
  EXPECT_EQ(m.at("weight_tolerance"), 1e-12);
}

TEST(Sweep, EquilibriumAndEvolveModes) {
  const fs::path dir = scratch("modes");
  const RunConfig eq = parse_config(quick_config("jbeta = [1, 2, 5]\n"));
  const SweepOutput e = run_sweep(eq, Subcommand::Equilibrium, dir, 1);
  EXPECT_EQ(e.equilibrium_rows.size(), 6u);
  const SweepOutput v = run_sweep(eq, Subcommand::Evolve, dir, 1);
  EXPECT_EQ(v.evolve_rows.size(), 2u * 201u);
}

TEST(Sweep, NumberFormat) {
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}
