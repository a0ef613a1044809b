#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "monoevo/function_space.hpp"
#include "monoevo/operator.hpp"

namespace monoevo {

enum class Stepper { automatic, semi_implicit, implicit_midpoint };
enum class DtPolicy { fixed, adaptive };
enum class RunStatus { ok, blowup, step_failure };

std::string to_string(Stepper s);
std::string to_string(DtPolicy p);
std::string to_string(RunStatus s);
Stepper parse_stepper(const std::string& name);
DtPolicy parse_dt_policy(const std::string& name);

struct SolverConfig {
  std::size_t n = 0;  // Galerkin dimension; 0 uses every basis mode
  double T = 1.0;
  double dt = 1e-3;
  Stepper stepper = Stepper::automatic;
  DtPolicy dt_policy = DtPolicy::fixed;
  double atol = 1e-8;  // adaptive error control
  double rtol = 1e-6;
  double stage_tol = 1e-12;  // relative tolerance of the implicit stage solve
  int max_stage_iterations = 50;
  double dt_min = 1e-10;
  double blowup_threshold = 1e8;
  std::uint64_t seed = 42;

  void validate(const Basis& basis) const;
};

/// automatic resolves to implicit_midpoint for alpha = 2, semi_implicit otherwise.
Stepper resolve_stepper(const EvolutionProblem& problem, Stepper requested);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<TripleNorms> norms;
  std::vector<double> x_norm;  // running int_0^t ||u||_V^alpha
  RunStatus status = RunStatus::ok;
  std::string message;
  std::size_t n_active = 0;
  Stepper stepper = Stepper::implicit_midpoint;
  double alpha = 2.0;
  std::size_t rejected_steps = 0;
  std::size_t stage_iterations = 0;

  std::size_t size() const { return times.size(); }
  bool ok() const { return status == RunStatus::ok; }
};

Trajectory solve(const EvolutionProblem& problem, const SolverConfig& config);

/// Linear interpolation of the state at time t within the recorded range.
Field state_at(const Trajectory& trajectory, double t);

struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> slack;
  double c1 = 0.0;
  double min_slack = 0.0;
  // the three quantities bounded in the a-priori estimate
  double x_norm = 0.0;        // (int ||u||_V^alpha)^{1/alpha}
  double sup_h = 0.0;         // sup ||u||_H
  double operator_norm = 0.0; // (int ||A(u)||_{V*}^{alpha'})^{1/alpha'}
  double K = 0.0;             // their sum
};

/// C1 in 2 |b| |v| <= (delta/2) |v|^alpha + C1 |b|^{alpha/(alpha-1)}.
double ledger_young_constant(double alpha, double delta);

EnergyLedger energy_monitor(const Trajectory& trajectory, const EvolutionProblem& problem);

/// |<u(t),v> - <u(0),v> - int_0^t <P_n(A + b), v>| with trapezoid quadrature.
double weak_residual(const Trajectory& trajectory, const EvolutionProblem& problem, const Field& v,
                     double t);

struct ConvergenceRow {
  std::size_t n_coarse = 0;
  std::size_t n_fine = 0;
  double distance = 0.0;
  bool ok = true;
  std::string message;
};

struct ConvergenceTable {
  std::vector<std::size_t> n_list;
  std::vector<ConvergenceRow> rows;
  bool decreasing() const;
};

ConvergenceTable convergence_study(const EvolutionProblem& problem, const SolverConfig& base,
                                   const std::vector<std::size_t>& n_list);

using ForcingFunction = std::function<std::vector<double>(double)>;

struct DependenceReport {
  std::vector<double> times;
  std::vector<double> lhs;       // ||u1 - u2||_H^2
  std::vector<double> rhs;       // exp(E(t)) (||du0||^2 + int ||db||^2)
  std::vector<double> exponent;  // E(t)
  double factor = 1.0;           // exp(E(T))
  double min_slack = 0.0;
  bool holds = true;
  bool ok = true;
  std::string message;
};

/// Solves the problem from two data sets and checks the stability bound at every step.
DependenceReport dependence_experiment(const EvolutionProblem& problem, const Field& u1_0,
                                       const Field& u2_0, const ForcingFunction& b1,
                                       const ForcingFunction& b2, const SolverConfig& config);

}  // namespace monoevo
