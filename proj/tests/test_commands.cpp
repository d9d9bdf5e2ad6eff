#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include <gtest/gtest.h>

#include "dsoar/commands.hpp"
#include "dsoar/io.hpp"

using namespace dsoar;
namespace fs = std::filesystem;

namespace {

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("dsoar_test_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Scenario scenario(const std::string& sub) const {
    Scenario s;
    s.output_dir = (dir_ / sub).string();
    return s;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CommandTest, SimulateWritesTrajectoryAndReport) {
  const CommandResult r = cmd_simulate(scenario("sim"));
  EXPECT_EQ(r.exit_code, kExitOk);
  ASSERT_EQ(r.files.size(), 2u);
  for (const auto& f : r.files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_EQ(r.report["status"], "completed");
  EXPECT_TRUE(r.report["full_cycle"].get<bool>());
  EXPECT_EQ(r.report["samples"], 10001);
  EXPECT_EQ(r.report["wind_sign"], 1);
  EXPECT_EQ(r.report["scenario"]["esc"]["omega"], 5.8);
  const Trajectory back = read_trajectory_csv(r.files[0], BirdWindParams{});
  EXPECT_EQ(back.size(), 10001u);
}

TEST_F(CommandTest, SimulateIsDeterministic) {
  const CommandResult a = cmd_simulate(scenario("a"));
  const CommandResult b = cmd_simulate(scenario("b"));
  EXPECT_EQ(slurp(a.files[0]), slurp(b.files[0]));
}

TEST_F(CommandTest, ShortRunReportsIncompleteCycle) {
  Scenario s = scenario("short");
  s.t_end = 0.01;
  const CommandResult r = cmd_simulate(s);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_FALSE(r.report["full_cycle"].get<bool>());
  EXPECT_EQ(r.report["phases"]["status"], "incomplete cycle");
}

TEST_F(CommandTest, InvalidScenarioThrowsBeforeWriting) {
  Scenario s = scenario("bad");
  s.bird.wind.delta = 0.0;
  EXPECT_THROW((void)cmd_simulate(s), ConfigError);
  EXPECT_FALSE(fs::exists(dir_ / "bad" / "trajectory.csv"));
}

TEST_F(CommandTest, ControllabilityOnGlider) {
  const CommandResult r = cmd_controllability(scenario("larc"));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["rank"], 7);
  EXPECT_TRUE(r.report["full_rank"].get<bool>());
  EXPECT_FALSE(r.report["numeric_breakdown"].get<bool>());
  EXPECT_EQ(r.report["weight"]["found"], nlohmann::json::array({1, 5}));
  EXPECT_TRUE(r.report["bad_bracket"]["nonvanishing"].get<bool>());
  EXPECT_TRUE(fs::exists(r.files.back()));
}

TEST_F(CommandTest, ControllabilityOnReferenceSystems) {
  Scenario s = scenario("robot");
  s.larc.system = "ground_robot";
  EXPECT_EQ(cmd_controllability(s).report["rank"], 3);
  s = scenario("ex2");
  s.larc.system = "example2";
  s.demo_chenfliess.trials = 20;
  const CommandResult r = cmd_controllability(s);
  EXPECT_EQ(r.report["rank"], 2);
  EXPECT_TRUE(r.report["bad_bracket"]["needed_for_span"].get<bool>());
  EXPECT_TRUE(r.report["obstruction"]["nonnegative"].get<bool>());
}

TEST_F(CommandTest, ControllabilityRankDeficitIsNumericExit) {
  Scenario s = scenario("deficit");
  s.larc.brackets = {"f", "b", "[f,[f,b]]"};
  const CommandResult r = cmd_controllability(s);
  EXPECT_EQ(r.exit_code, kExitNumeric);
  EXPECT_FALSE(r.report["full_rank"].get<bool>());
}

TEST_F(CommandTest, UnknownSystemIsInputError) {
  Scenario s = scenario("nope");
  s.larc.system = "rocket";
  EXPECT_THROW((void)cmd_controllability(s), std::invalid_argument);
}

TEST_F(CommandTest, CompareAgainstOwnOutput) {
  const CommandResult sim = cmd_simulate(scenario("ref"));
  Scenario s = scenario("cmp");
  s.reference = sim.files[0].string();
  const CommandResult r = cmd_compare(s);
  EXPECT_EQ(r.exit_code, kExitOk);
  for (const auto& [name, v] : r.report["comparison"]["rmse"].items()) {
    EXPECT_EQ(v.get<double>(), 0.0) << name;
  }
  Scenario none = scenario("cmp2");
  EXPECT_THROW((void)cmd_compare(none), std::invalid_argument);
}

TEST_F(CommandTest, DemoEsc) {
  const CommandResult r = cmd_demo_esc(scenario("esc"));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_LE(r.report["max_error_last_window"].get<double>(), 0.2);
  EXPECT_EQ(r.report["wind_sign"], 1);
}

TEST_F(CommandTest, DemoChenFliess) {
  Scenario s = scenario("cf");
  s.demo_chenfliess.trials = 50;
  const CommandResult r = cmd_demo_chenfliess(s);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.report["obstruction"]["nonnegative"].get<bool>());
  EXPECT_LE(r.report["obstruction"]["max_ode_discrepancy"].get<double>(), 1e-6);
  EXPECT_LE(r.report["obstruction"]["max_fliess_order2_discrepancy"].get<double>(), 1e-9);
}

TEST(ObstructionSweepProperty, SeedDeterminesResult) {
  DemoChenFliessSettings cfg;
  cfg.trials = 30;
  const ObstructionSweep a = example2_obstruction_sweep(cfg);
  const ObstructionSweep b = example2_obstruction_sweep(cfg);
  EXPECT_EQ(a.endpoints, b.endpoints);
  cfg.seed = 2;
  EXPECT_NE(example2_obstruction_sweep(cfg).endpoints, a.endpoints);
  EXPECT_GE(a.min_output, -1e-12);
}
