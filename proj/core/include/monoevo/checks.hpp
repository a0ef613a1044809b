#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "monoevo/function_space.hpp"
#include "monoevo/inequalities.hpp"
#include "monoevo/operator.hpp"

namespace monoevo {

enum class Condition { H1, H2, H3, H4, C3 };
enum class CheckStatus { pass, fail, skipped };

std::string to_string(Condition c);
std::string to_string(CheckStatus s);

struct Violation {
  std::size_t sample = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::map<std::string, double> inputs;  // norms of the offending arguments
};

struct ConditionReport {
  Condition condition = Condition::H1;
  std::size_t samples = 0;
  std::vector<Violation> violations;
  std::map<std::string, double> fitted_constants;
  double min_slack = 0.0;
  std::size_t worst_sample = 0;
  bool surrogate = false;
  CheckStatus status = CheckStatus::pass;
  std::uint64_t seed = 0;
  std::string note;

  bool passed() const { return status != CheckStatus::fail; }
};

struct SamplerConfig {
  double decay = 1.5;
  std::vector<double> radii{1.0, 5.0, 20.0};
  std::uint64_t seed = 42;
};

/// Random fields with per-mode spread (|e_k|_V / min |e|_V)^{-decay}, rescaled so
/// that ||v||_V = R * U(0,1] with R cycling through the radii. Every draw is a
/// pure function of (seed, index, stream).
class FieldSampler {
 public:
  FieldSampler(Basis basis, SamplerConfig config = {});

  Field draw(std::size_t index, int stream = 0) const;
  Field draw_with_norm(std::size_t index, int stream, double v_norm) const;
  double radius(std::size_t index) const;

  const SamplerConfig& config() const { return config_; }
  const Basis& basis() const { return basis_; }

 private:
  Basis basis_;
  SamplerConfig config_;
  std::vector<double> sigma_;

  std::vector<double> raw(std::size_t index, int stream) const;
};

/// Run fn(i) for i in [0, n) across hardware threads; results must go to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct HemicontinuityOptions {
  int cells = 16;
  double tolerance = 1e-6;
};

ConditionReport check_hemicontinuity(const EvolutionProblem& problem, double t, const Field& v1,
                                     const Field& v2, const Field& v,
                                     const HemicontinuityOptions& options = {});
/// Hemicontinuity over sampled triples.
ConditionReport check_hemicontinuity(const EvolutionProblem& problem, double t,
                                     const FieldSampler& sampler, std::size_t n_samples,
                                     const HemicontinuityOptions& options = {});

/// Slack of local monotonicity for one pair.
SlackReport local_monotonicity_slack(const EvolutionProblem& problem, double t, const Field& v1,
                                     const Field& v2);
ConditionReport check_local_monotonicity(const EvolutionProblem& problem, double t,
                                         const FieldSampler& sampler, std::size_t n_samples);
ConditionReport check_coercivity(const EvolutionProblem& problem, double t,
                                 const FieldSampler& sampler, std::size_t n_samples);
ConditionReport check_growth(const EvolutionProblem& problem, double t,
                             const FieldSampler& sampler, std::size_t n_samples);
ConditionReport check_uniqueness_growth(const OperatorTraits& traits, const FieldSampler& sampler,
                                        std::size_t n_samples);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  std::vector<double> radii;
  std::vector<double> required;
};

/// For each radius R, the largest weight sup_w (lhs + margin)/||w||_H^2 - C over
/// pairs (v + w, v) with ||v||_V = R; then a least-squares fit of log weight
/// against log R over the positive points.
SlopeFit required_weight_slope(const EvolutionProblem& problem, double t,
                               const FieldSampler& sampler, std::span<const double> radii,
                               std::size_t pairs_per_radius);

}  // namespace monoevo
