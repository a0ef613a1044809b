#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "monoevo/csv.hpp"
#include "monoevo/error.hpp"
#include "monoevo/runner.hpp"

using namespace monoevo;
namespace fs = std::filesystem;

namespace {

const char* kHeat = R"(equation = burgers
tasks = solve

[params]
F = none
g = none
h = none

[basis]
domain = interval
L = pi
n = 16
)";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("monoevo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return "";
}

RunConfig heat_run(const std::string& tasks, const fs::path& out) {
  RunConfig c = parse_config(std::string(kHeat) + "[initial]\nkind = mode\nmode = 1\n[solver]\ndt = 1e-4\n");
  c.tasks.clear();
  std::string item;
  std::istringstream in(tasks);
  while (std::getline(in, item, ',')) c.tasks.push_back(item);
  c.output_dir = out;
  return c;
}

}  // namespace

TEST(Config, MinimalHeatIsValid) {
  const RunConfig c = parse_config(kHeat);
  EXPECT_EQ(c.equation, "burgers");
  EXPECT_EQ(c.tasks, std::vector<std::string>{"solve"});
  EXPECT_EQ(c.solver.dt, 1e-3);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_NEAR(c.basis.lengths.at(0), std::numbers::pi, 1e-15);
  EXPECT_EQ(make_problem(c).name, "heat");
}

TEST(Config, UnknownEquationListsCatalog) {
  const auto m = message_of("equation = nse_3d\ntasks = solve\n");
  EXPECT_NE(m.find("nse_3d"), std::string::npos);
  EXPECT_NE(m.find("nse_2d"), std::string::npos);
  EXPECT_NE(m.find("leray_alpha_3d"), std::string::npos);
}

TEST(Config, PLaplaceNeedsPAboveTwo) {
  const auto m = message_of("equation = p_laplace\ntasks = solve\n[params]\np = 1.5\n");
  EXPECT_NE(m.find("p > 2 required"), std::string::npos) << m;
  EXPECT_NE(m.find("params"), std::string::npos) << m;
}

TEST(Config, UnknownKeyAndTypeMismatchCarryKeyPath) {
  EXPECT_NE(message_of(std::string(kHeat) + "[solver]\ndtt = 1\n").find("solver.dtt"), std::string::npos);
  EXPECT_NE(message_of(std::string(kHeat) + "[solver]\ndt = fast\n").find("solver.dt"), std::string::npos);
  EXPECT_NE(message_of("tasks = solve\n").find("equation"), std::string::npos);
  EXPECT_NE(message_of("equation = burgers\ntasks = fly\n").find("tasks"), std::string::npos);
  EXPECT_NE(message_of("equation = burgers\ntasks = solve\n[basis]\nn = -3\n").find("basis.n"), std::string::npos);
}

TEST(Config, RealLiterals) {
  EXPECT_DOUBLE_EQ(parse_real_literal("0.25", "k"), 0.25);
  EXPECT_DOUBLE_EQ(parse_real_literal("pi", "k"), std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_real_literal("2*pi", "k"), 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_real_literal("pi/2", "k"), std::numbers::pi / 2);
  EXPECT_THROW(parse_real_literal("tau", "k"), ConfigurationError);
}

TEST(Csv, RoundTrip) {
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  CsvTable t{{"a", "b"}, {}};
  t.add_row({format_real(0.1), "x=1;y=2"});
  write_csv(dir / "t.csv", t);
  const auto back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(std::stod(back.rows[0][0]), 0.1);
  EXPECT_THROW(t.add_row({"only one"}), Error);
}

TEST(Run, HeatSolveWritesTrajectory) {
  const auto out = scratch("heat");
  const auto report = run(heat_run("solve,energy", out));
  EXPECT_EQ(report.exit_code, 0);
  const auto tr = read_csv(out / "trajectory.csv");
  EXPECT_NEAR(std::stod(tr.rows.back()[tr.column("norm_H")]), std::exp(-1.0), 1e-6);
  for (const auto& f : report.manifest) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_TRUE(fs::exists(out / "ledger.csv"));
  EXPECT_TRUE(fs::exists(out / "report.txt"));
}

TEST(Run, OverclaimedTraitExitsThree) {
  const auto out = scratch("delta10");
  auto c = heat_run("check_h3", out);
  c.trait_overrides["delta"] = 10.0;
  c.checks.samples = 200;
  const auto report = run(c);
  EXPECT_EQ(report.exit_code, 3);
  const auto checks = read_csv(out / "checks.csv");
  ASSERT_EQ(checks.rows.size(), 1u);
  EXPECT_EQ(checks.rows[0][checks.column("status")], "fail");
  EXPECT_FALSE(checks.rows[0][checks.column("worst_inputs")].empty());
}

TEST(Run, BlowupExitsTwo) {
  const auto out = scratch("blowup");
  auto c = parse_config(
      "equation = burgers\ntasks = solve\n[initial]\nkind = random\nradius = 1000\n[solver]\ndt = 0.1\nstepper = semi_implicit\n");
  c.output_dir = out;
  EXPECT_EQ(run(c).exit_code, 2);
  EXPECT_TRUE(fs::exists(out / "tasks.csv"));
}

TEST(Compare, IdenticalRunsHaveZeroDrift) {
  const auto a = scratch("cmp_a"), b = scratch("cmp_b");
  run(heat_run("check_h2,solve,energy", a));
  run(heat_run("check_h2,solve,energy", b));
  const auto d = compare_runs(a, b);
  EXPECT_TRUE(d.zero());
  EXPECT_FALSE(d.drifts.empty());
}

TEST(Compare, SeedsChangeConstantsNotStatuses) {
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  auto ca = parse_config("equation = burgers\ntasks = check_h2, check_h3, check_h4\n[checks]\nsamples = 300\n");
  auto cb = parse_config("equation = burgers\ntasks = check_h2, check_h3, check_h4\nseed = 43\n[checks]\nsamples = 300\n");
  ca.output_dir = a;
  cb.output_dir = b;
  run(ca);
  run(cb);
  const auto ta = read_csv(a / "checks.csv"), tb = read_csv(b / "checks.csv");
  for (std::size_t i = 0; i < ta.rows.size(); ++i) EXPECT_EQ(ta.rows[i][ta.column("status")], tb.rows[i][tb.column("status")]);
  EXPECT_GT(compare_runs(a, b).max_abs, 0.0);
}

TEST(Compare, HalvedStepDriftIsSecondOrder) {
  const auto a = scratch("dt_a"), b = scratch("dt_b");
  auto ca = heat_run("solve", a);
  ca.solver.dt = 1e-2;
  auto cb = heat_run("solve", b);
  cb.solver.dt = 5e-3;
  run(ca);
  run(cb);
  double drift = 0.0;
  for (const auto& d : compare_runs(a, b).drifts)
    if (d.file == "trajectory.csv" && d.column == "norm_H") drift = d.max_abs;
  EXPECT_GT(drift, 0.0);
  EXPECT_LT(drift, 1e-2 * 1e-2);  // midpoint error ~ dt^2 / 12 on the first mode
}

TEST(Compare, SchemaMismatch) {
  const auto a = scratch("schema_a"), b = scratch("schema_b");
  run(heat_run("solve", a));
  run(heat_run("solve,energy", b));
  EXPECT_THROW(compare_runs(a, b), SchemaMismatch);
  EXPECT_THROW(compare_runs(a, scratch("missing")), SchemaMismatch);
}
