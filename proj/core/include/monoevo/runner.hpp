#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "monoevo/checks.hpp"
#include "monoevo/function_space.hpp"
#include "monoevo/galerkin.hpp"
#include "monoevo/operator.hpp"

namespace monoevo {

struct BasisSpec {
  std::string domain;          // interval | box | torus
  std::vector<double> lengths;
  int n = 0;
  GridPolicy grid = GridPolicy::quartic_exact;
};

/// Initial datum. kinds: zero, mode, random, power_law, taylor_green.
struct InitialSpec {
  std::string kind = "random";
  std::size_t mode = 1;      // 1-based, for kind = mode
  double amplitude = 1.0;    // mode, power_law, taylor_green
  double radius = 1.0;       // V-norm of a random datum
  double decay = 2.0;        // power_law: amplitude * k^{-decay} on the first count modes
  std::size_t count = 8;
};

struct CheckSpec {
  std::size_t samples = 1000;
  std::size_t h1_samples = 0;  // 0 means samples
  SamplerConfig sampler;
  double time = 0.0;
  double h1_tolerance = 1e-6;
};

struct DependenceSpec {
  double perturbation = 0.05;  // u1(0) = (1 + perturbation) u2(0)
  std::string forcing1;        // empty keeps the problem's forcing
  std::string forcing2;
};

struct RunConfig {
  std::string equation;
  std::map<std::string, std::string> params;
  BasisSpec basis;
  InitialSpec initial;
  SolverConfig solver;
  std::vector<std::string> tasks;
  std::filesystem::path output_dir = "monoevo_out";
  std::uint64_t seed = 42;
  CheckSpec checks;
  std::map<std::string, double> trait_overrides;
  DependenceSpec dependence;
  std::vector<std::size_t> convergence_n;
  std::string source;  // original text, echoed in the report
};

const std::vector<std::string>& task_names();

/// Parses an INI document and validates it by building the problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Real literal with optional pi: "0.5", "pi", "2*pi", "pi/2".
double parse_real_literal(const std::string& text, const std::string& key_path);

/// Builds basis, problem, initial datum and trait overrides for a config.
EvolutionProblem make_problem(const RunConfig& config);

enum class TaskStatus { pass, fail, skipped, numerical_failure };
std::string to_string(TaskStatus s);

struct TaskResult {
  std::string task;
  TaskStatus status = TaskStatus::pass;
  std::string detail;
  double seconds = 0.0;
};

struct RunReport {
  std::string equation;
  std::uint64_t seed = 0;
  std::vector<TaskResult> tasks;
  std::vector<ConditionReport> checks;
  std::vector<std::filesystem::path> manifest;
  std::filesystem::path output_dir;
  int exit_code = 0;
};

/// Executes the tasks in order and writes the CSV files and report.txt.
/// Exit codes: 0 all pass, 2 numerical failure, 3 any violation.
RunReport run(const RunConfig& config);

struct Drift {
  std::string file;
  std::string column;
  double max_abs = 0.0;
};

struct DriftSummary {
  std::vector<Drift> drifts;
  double max_abs = 0.0;
  bool zero() const { return max_abs == 0.0; }
};

/// Per-column max absolute difference of the CSV files of two run directories
/// (timing.csv excluded). Throws SchemaMismatch when files or headers differ.
DriftSummary compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace monoevo
