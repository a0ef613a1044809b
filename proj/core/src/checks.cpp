#include "monoevo/checks.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "monoevo/error.hpp"

namespace monoevo {

std::string to_string(Condition c) {
  switch (c) {
    case Condition::H1: return "H1";
    case Condition::H2: return "H2";
    case Condition::H3: return "H3";
    case Condition::H4: return "H4";
    case Condition::C3: return "C3";
  }
  return "?";
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------- sampler

FieldSampler::FieldSampler(Basis basis, SamplerConfig config)
    : basis_(std::move(basis)), config_(std::move(config)) {
  if (config_.radii.empty()) throw ConfigurationError("sampler needs at least one radius");
  for (double r : config_.radii)
    if (!(r > 0.0)) throw ConfigurationError(fmt::format("sampler radius must be > 0, got {}", r));
  const auto w = basis_.v_weight();
  const double wmin = *std::min_element(w.begin(), w.end());
  sigma_.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sigma_[i] = std::pow(w[i] / wmin, -config_.decay);
}

double FieldSampler::radius(std::size_t index) const {
  return config_.radii[index % config_.radii.size()];
}

std::vector<double> FieldSampler::raw(std::size_t index, int stream) const {
  std::seed_seq seq{static_cast<std::uint32_t>(config_.seed), static_cast<std::uint32_t>(config_.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::vector<double> c(sigma_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sigma_[i] * normal(rng);
  // one more draw for the radial factor
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  c.push_back(1.0 - uni(rng));  // (0, 1]
  return c;
}

Field FieldSampler::draw_with_norm(std::size_t index, int stream, double v_norm) const {
  auto c = raw(index, stream);
  c.pop_back();
  Field f(basis_, std::move(c));
  const double nv = norm(f, NormKind::V);
  if (!(nv > 0.0)) return Field::zero(basis_);
  return f * (v_norm / nv);
}

Field FieldSampler::draw(std::size_t index, int stream) const {
  auto c = raw(index, stream);
  const double u = c.back();
  c.pop_back();
  Field f(basis_, std::move(c));
  const double nv = norm(f, NormKind::V);
  if (!(nv > 0.0)) return Field::zero(basis_);
  return f * (radius(index) * u / nv);
}

// ---------------------------------------------------------------- helpers

namespace {

double scaled_tol(std::initializer_list<double> magnitudes) {
  double m = 1.0;
  for (double x : magnitudes) m = std::max(m, std::abs(x));
  return kSlackTolerance * m;
}

struct SampleResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = kSlackTolerance;
  std::map<std::string, double> inputs;
  std::map<std::string, double> fit;  // per-sample candidates for fitted constants
};

enum class FitMode { max, min };

ConditionReport collect(Condition cond, std::vector<SampleResult>& results, std::uint64_t seed,
                        const std::vector<std::pair<std::string, FitMode>>& fits) {
  ConditionReport rep;
  rep.condition = cond;
  rep.samples = results.size();
  rep.seed = seed;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& [name, mode] : fits)
    rep.fitted_constants[name] = mode == FitMode::max ? -std::numeric_limits<double>::infinity()
                                                      : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.slack < rep.min_slack) {
      rep.min_slack = r.slack;
      rep.worst_sample = i;
    }
    if (r.slack < -r.tol) rep.violations.push_back(Violation{i, r.lhs, r.rhs, r.slack, r.inputs});
    for (const auto& [name, mode] : fits) {
      auto it = r.fit.find(name);
      if (it == r.fit.end() || !std::isfinite(it->second)) continue;
      double& slot = rep.fitted_constants[name];
      slot = mode == FitMode::max ? std::max(slot, it->second) : std::min(slot, it->second);
    }
  }
  for (auto& [name, value] : rep.fitted_constants)
    if (!std::isfinite(value)) value = 0.0;
  if (results.empty()) rep.min_slack = 0.0;
  rep.status = rep.violations.empty() ? CheckStatus::pass : CheckStatus::fail;
  return rep;
}

std::map<std::string, double> norms_of(const char* tag, const Field& f) {
  return {{fmt::format("{}_H", tag), norm(f, NormKind::H)}, {fmt::format("{}_V", tag), norm(f, NormKind::V)}};
}

}  // namespace

// ---------------------------------------------------------------- H1

namespace {

SampleResult hemicontinuity_sample(const EvolutionProblem& problem, double t, const Field& v1,
                                   const Field& v2, const Field& v,
                                   const HemicontinuityOptions& opt) {
  if (opt.cells < 16) throw ConfigurationError("hemicontinuity needs at least 16 cells on [-1,1]");
  const int fine = 4 * opt.cells;
  std::vector<double> phi(fine + 1);
  double scale = 1.0;
  for (int j = 0; j <= fine; ++j) {
    const double s = -1.0 + 2.0 * j / fine;
    phi[j] = pairing(apply(problem, t, v1 + s * v2), v);
    scale = std::max(scale, std::abs(phi[j]));
  }
  auto discrepancy = [&](int stride) {
    double d = 0.0;
    for (int a = 0; a + 2 * stride <= fine; a += 2 * stride)
      d = std::max(d, std::abs(phi[a + stride] - 0.5 * (phi[a] + phi[a + 2 * stride])));
    return d;
  };
  const double d0 = discrepancy(2);
  const double d1 = discrepancy(1);
  const double tol = opt.tolerance * scale;
  SampleResult r;
  r.lhs = d1;
  r.rhs = std::max(tol, 0.6 * d0);
  r.slack = r.rhs - r.lhs;
  r.tol = 0.0;
  r.inputs = norms_of("v1", v1);
  r.inputs.merge(norms_of("v2", v2));
  r.fit["refinement_change"] = d1;
  r.fit["refinement_ratio"] = d0 > 0.0 ? d1 / d0 : 0.0;
  return r;
}

}  // namespace

ConditionReport check_hemicontinuity(const EvolutionProblem& problem, double t, const Field& v1,
                                     const Field& v2, const Field& v,
                                     const HemicontinuityOptions& options) {
  std::vector<SampleResult> res{hemicontinuity_sample(problem, t, v1, v2, v, options)};
  return collect(Condition::H1, res, 0,
                 {{"refinement_change", FitMode::max}, {"refinement_ratio", FitMode::max}});
}

ConditionReport check_hemicontinuity(const EvolutionProblem& problem, double t,
                                     const FieldSampler& sampler, std::size_t n_samples,
                                     const HemicontinuityOptions& options) {
  std::vector<SampleResult> res(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    res[i] = hemicontinuity_sample(problem, t, sampler.draw(i, 0), sampler.draw(i, 1),
                                   sampler.draw(i, 2), options);
  });
  return collect(Condition::H1, res, sampler.config().seed,
                 {{"refinement_change", FitMode::max}, {"refinement_ratio", FitMode::max}});
}

// ---------------------------------------------------------------- H2

namespace {

SampleResult monotonicity_sample(const EvolutionProblem& problem, double t, const Field& v1,
                                 const Field& v2) {
  const auto& tr = problem.traits;
  const Field w = v1 - v2;
  const double lhs = pairing(apply(problem, t, v1) - apply(problem, t, v2), w);
  const double wh2 = std::pow(norm(w, NormKind::H), 2);
  const double margin = tr.margin.coefficient * std::pow(norm(w, NormKind::V), tr.margin.exponent);
  const double weight = tr.rho(v1) + tr.eta(v2);
  const double gain = (tr.c_monotone + weight) * wh2;
  SampleResult r;
  r.lhs = lhs;
  r.rhs = gain - margin;
  r.slack = r.rhs - r.lhs;
  r.tol = scaled_tol({lhs, gain, margin});
  r.inputs = norms_of("v1", v1);
  r.inputs.merge(norms_of("v2", v2));
  if (wh2 > 0.0) r.fit["C_hat"] = (lhs + margin - weight * wh2) / wh2;
  return r;
}

}  // namespace

SlackReport local_monotonicity_slack(const EvolutionProblem& problem, double t, const Field& v1,
                                     const Field& v2) {
  const auto s = monotonicity_sample(problem, t, v1, v2);
  return make_slack(s.lhs, s.rhs, s.tol);
}

ConditionReport check_local_monotonicity(const EvolutionProblem& problem, double t,
                                         const FieldSampler& sampler, std::size_t n_samples) {
  std::vector<SampleResult> res(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const Field v2 = sampler.draw(i, 1);
    // every fourth pair is a close pair
    const Field v1 = (i % 4 == 3) ? v2 + 1e-2 * sampler.draw(i, 0) : sampler.draw(i, 0);
    res[i] = monotonicity_sample(problem, t, v1, v2);
  });
  return collect(Condition::H2, res, sampler.config().seed, {{"C_hat", FitMode::max}});
}

// ---------------------------------------------------------------- H3

ConditionReport check_coercivity(const EvolutionProblem& problem, double t,
                                 const FieldSampler& sampler, std::size_t n_samples) {
  const auto& tr = problem.traits;
  const double f = tr.f_profile(t);
  std::vector<SampleResult> res(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const Field v = i == 0 ? Field::zero(problem.basis) : sampler.draw(i, 0);
    const double lhs = 2.0 * pairing(apply(problem, t, v), v);
    const double vv = std::pow(norm(v, NormKind::V), tr.alpha);
    const double hh = std::pow(norm(v, NormKind::H), 2);
    SampleResult r;
    r.lhs = lhs;
    r.rhs = -tr.delta * vv + tr.c_coercive * hh + f;
    r.slack = r.rhs - r.lhs;
    r.tol = scaled_tol({lhs, tr.delta * vv, tr.c_coercive * hh, f});
    r.inputs = norms_of("v", v);
    if (vv > 0.0) r.fit["delta_hat"] = (-lhs + tr.c_coercive * hh + f) / vv;
    if (hh > 0.0) r.fit["C_hat"] = (lhs + tr.delta * vv - f) / hh;
    res[i] = std::move(r);
  });
  return collect(Condition::H3, res, sampler.config().seed,
                 {{"delta_hat", FitMode::min}, {"C_hat", FitMode::max}});
}

// ---------------------------------------------------------------- H4

ConditionReport check_growth(const EvolutionProblem& problem, double t,
                             const FieldSampler& sampler, std::size_t n_samples) {
  const auto& tr = problem.traits;
  const bool surrogate = !problem.basis.hilbertian();
  const double f = tr.f_profile(t);
  const double f_part = std::pow(f, (tr.alpha - 1.0) / tr.alpha);
  std::vector<SampleResult> res(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const Field v = i == 0 ? Field::zero(problem.basis) : sampler.draw(i, 0);
    const Field a = apply(problem, t, v);
    const double lhs = surrogate ? dual_norm_surrogate(a) : problem.dual_norm(a);
    const double nv = std::pow(norm(v, NormKind::V), tr.alpha - 1.0);
    const double hb = 1.0 + std::pow(norm(v, NormKind::H), tr.beta);
    SampleResult r;
    r.lhs = lhs;
    r.rhs = (f_part + tr.c_growth * nv) * hb;
    r.slack = r.rhs - r.lhs;
    r.tol = scaled_tol({lhs, r.rhs});
    r.inputs = norms_of("v", v);
    if (nv > 0.0) r.fit["C_hat"] = std::max(0.0, (lhs / hb - f_part) / nv);
    res[i] = std::move(r);
  });
  auto rep = collect(Condition::H4, res, sampler.config().seed, {{"C_hat", FitMode::max}});
  rep.surrogate = surrogate;
  if (surrogate) rep.note = "dual norm replaced by max_i |<A v, e_i>| / |e_i|_V";
  return rep;
}

// ---------------------------------------------------------------- uniqueness

ConditionReport check_uniqueness_growth(const OperatorTraits& traits, const FieldSampler& sampler,
                                        std::size_t n_samples) {
  if (!traits.uniqueness) {
    ConditionReport rep;
    rep.condition = Condition::C3;
    rep.status = CheckStatus::skipped;
    rep.seed = sampler.config().seed;
    rep.note = "no uniqueness exponent gamma declared";
    return rep;
  }
  const auto& u = *traits.uniqueness;
  std::vector<SampleResult> res(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const Field v = sampler.draw(i, 0);
    const double lhs = traits.rho(v) + traits.eta(v);
    const double shape = (1.0 + std::pow(norm(v, NormKind::V), traits.alpha)) *
                         (1.0 + std::pow(norm(v, NormKind::H), u.gamma));
    SampleResult r;
    r.lhs = lhs;
    r.rhs = u.c_const * shape;
    r.slack = r.rhs - r.lhs;
    r.tol = scaled_tol({lhs, r.rhs});
    r.inputs = norms_of("v", v);
    r.fit["C_hat"] = lhs / shape;
    res[i] = std::move(r);
  });
  return collect(Condition::C3, res, sampler.config().seed, {{"C_hat", FitMode::max}});
}

// ---------------------------------------------------------------- slope

SlopeFit required_weight_slope(const EvolutionProblem& problem, double t,
                               const FieldSampler& sampler, std::span<const double> radii,
                               std::size_t pairs_per_radius) {
  const auto& tr = problem.traits;
  SlopeFit fit;
  for (double radius : radii) {
    std::vector<double> best(pairs_per_radius, -std::numeric_limits<double>::infinity());
    parallel_for(pairs_per_radius, [&](std::size_t k) {
      const Field v = sampler.draw_with_norm(k, 1, radius);
      const Field w = sampler.draw_with_norm(k, 0, 1.0);
      const double lhs = pairing(apply(problem, t, v + w) - apply(problem, t, v), w);
      const double margin = tr.margin.coefficient * std::pow(norm(w, NormKind::V), tr.margin.exponent);
      best[k] = (lhs + margin) / std::pow(norm(w, NormKind::H), 2) - tr.c_monotone;
    });
    const double need = *std::max_element(best.begin(), best.end());
    fit.radii.push_back(radius);
    fit.required.push_back(need);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (!(fit.required[i] > 0.0)) continue;
    const double x = std::log(fit.radii[i]);
    const double y = std::log(fit.required[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points >= 2) {
    const double n = static_cast<double>(fit.points);
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  return fit;
}

}  // namespace monoevo
