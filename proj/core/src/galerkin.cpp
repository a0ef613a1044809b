#include "monoevo/galerkin.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "monoevo/checks.hpp"
#include "monoevo/error.hpp"
#include "monoevo/inequalities.hpp"

namespace monoevo {

std::string to_string(Stepper s) {
  switch (s) {
    case Stepper::automatic: return "automatic";
    case Stepper::semi_implicit: return "semi_implicit";
    case Stepper::implicit_midpoint: return "implicit_midpoint";
  }
  return "?";
}

std::string to_string(DtPolicy p) { return p == DtPolicy::fixed ? "fixed" : "adaptive"; }

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::blowup: return "blowup";
    case RunStatus::step_failure: return "step_failure";
  }
  return "?";
}

Stepper parse_stepper(const std::string& name) {
  if (name == "automatic" || name == "auto") return Stepper::automatic;
  if (name == "semi_implicit") return Stepper::semi_implicit;
  if (name == "implicit_midpoint") return Stepper::implicit_midpoint;
  throw ConfigurationError(
      fmt::format("unknown stepper '{}' (known: semi_implicit, implicit_midpoint, automatic)", name));
}

DtPolicy parse_dt_policy(const std::string& name) {
  if (name == "fixed") return DtPolicy::fixed;
  if (name == "adaptive") return DtPolicy::adaptive;
  throw ConfigurationError(fmt::format("unknown dt_policy '{}' (known: fixed, adaptive)", name));
}

void SolverConfig::validate(const Basis& basis) const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigurationError(fmt::format("solver: T must be > 0, got {}", T));
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError(fmt::format("solver: dt must be > 0, got {}", dt));
  if (n > basis.size())
    throw ConfigurationError(fmt::format("solver: n={} exceeds the {} basis modes", n, basis.size()));
  if (!(atol > 0.0) || !(rtol >= 0.0)) throw ConfigurationError("solver: atol must be > 0 and rtol >= 0");
  if (max_stage_iterations < 1) throw ConfigurationError("solver: max_stage_iterations must be >= 1");
  if (!(dt_min > 0.0)) throw ConfigurationError("solver: dt_min must be > 0");
}

Stepper resolve_stepper(const EvolutionProblem& problem, Stepper requested) {
  if (requested != Stepper::automatic) return requested;
  return problem.traits.alpha == 2.0 ? Stepper::implicit_midpoint : Stepper::semi_implicit;
}

namespace {

using Vec = Eigen::VectorXd;

class StepFailure {};

// The projected system y' = P_m (A(t, y) + b(t)) on the first m coefficients.
struct System {
  const EvolutionProblem& pb;
  std::size_t m;
  std::size_t N;
  bool use_stabilizer;

  System(const EvolutionProblem& p, std::size_t active)
      : pb(p), m(active), N(p.basis.size()) {
    use_stabilizer = static_cast<bool>(pb.stabilizer) &&
                     std::all_of(pb.linear_diagonal.begin(), pb.linear_diagonal.end(),
                                 [](double x) { return x == 0.0; });
  }

  std::vector<double> full(const Vec& y) const {
    std::vector<double> f(N, 0.0);
    std::copy(y.data(), y.data() + m, f.begin());
    return f;
  }

  Vec eval(double t, const Vec& y) const {
    const auto u = full(y);
    std::vector<double> out(N, 0.0);
    pb.op(t, u, out);
    Vec r(m);
    if (pb.forcing) {
      const auto b = pb.forcing(t);
      for (std::size_t i = 0; i < m; ++i) r[i] = out[i] + b[i];
    } else {
      for (std::size_t i = 0; i < m; ++i) r[i] = out[i];
    }
    if (!r.allFinite()) throw NumericalFailure(fmt::format("non-finite right-hand side at t={:.6g}", t), t, y.norm(), 0.0);
    return r;
  }

  Vec diag(const Vec& y) const {
    Vec d(m);
    if (use_stabilizer) {
      std::vector<double> dd(N, 0.0);
      pb.stabilizer(full(y), dd);
      for (std::size_t i = 0; i < m; ++i) d[i] = dd[i];
    } else {
      for (std::size_t i = 0; i < m; ++i) d[i] = pb.linear_diagonal[i];
    }
    return d;
  }
};

struct Stepping {
  const System& sys;
  const SolverConfig& cfg;
  Stepper stepper;
  std::size_t iterations = 0;

  Vec semi_implicit(double t, const Vec& y, double h) {
    const Vec D = sys.diag(y);
    const Vec F = sys.eval(t, y);
    return ((y + h * (F - D.cwiseProduct(y))).array() / (1.0 - h * D.array())).matrix();
  }

  // Stage z = y + h/2 F(t + h/2, z); returns 2z - y.
  Vec midpoint(double t, const Vec& y, double h) {
    const double tm = t + 0.5 * h;
    const Vec D = sys.diag(y);
    const Eigen::ArrayXd denom = 1.0 - 0.5 * h * D.array();
    Vec z = y;
    bool converged = false;
    for (int k = 0; k < cfg.max_stage_iterations; ++k) {
      ++iterations;
      const Vec F = sys.eval(tm, z);
      const Vec next = ((y + 0.5 * h * (F - D.cwiseProduct(z))).array() / denom).matrix();
      const double change = (next - z).norm();
      z = next;
      if (!z.allFinite()) break;
      if (change <= cfg.stage_tol * std::max(1.0, z.norm())) {
        converged = true;
        break;
      }
    }
    if (!converged && z.allFinite()) converged = newton(tm, y, h, z);
    if (!converged) throw StepFailure{};
    return 2.0 * z - y;
  }

  bool newton(double tm, const Vec& y, double h, Vec& z) {
    const Eigen::Index m = z.size();
    for (int k = 0; k < cfg.max_stage_iterations; ++k) {
      ++iterations;
      const Vec F = sys.eval(tm, z);
      const Vec G = z - y - 0.5 * h * F;
      Eigen::MatrixXd J = Eigen::MatrixXd::Identity(m, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        Vec zp = z;
        const double eps = 1e-7 * std::max(1.0, std::abs(z[j]));
        zp[j] += eps;
        J.col(j) -= 0.5 * h * (sys.eval(tm, zp) - F) / eps;
      }
      const Vec delta = J.partialPivLu().solve(G);
      if (!delta.allFinite()) return false;
      z -= delta;
      if (delta.norm() <= std::max(cfg.stage_tol, 1e-10) * std::max(1.0, z.norm())) return true;
    }
    return false;
  }

  Vec single(double t, const Vec& y, double h) {
    return stepper == Stepper::semi_implicit ? semi_implicit(t, y, h) : midpoint(t, y, h);
  }

  // One step of size h, halving recursively when the stage solve fails.
  Vec step(double t, const Vec& y, double h) {
    try {
      return single(t, y, h);
    } catch (const StepFailure&) {
      if (0.5 * h < cfg.dt_min) throw;
      const Vec mid = step(t, y, 0.5 * h);
      return step(t + 0.5 * h, mid, 0.5 * h);
    }
  }
};

Field to_field(const Basis& basis, const Vec& y) {
  std::vector<double> c(basis.size(), 0.0);
  std::copy(y.data(), y.data() + y.size(), c.begin());
  return Field(basis, std::move(c));
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f, std::size_t upto) {
  double s = 0.0;
  for (std::size_t k = 1; k <= upto; ++k) s += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return s;
}

}  // namespace

Trajectory solve(const EvolutionProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate(problem.basis);
  const std::size_t m = config.n == 0 ? problem.basis.size() : config.n;
  System sys(problem, m);
  Stepping st{sys, config, resolve_stepper(problem, config.stepper)};

  Trajectory tr;
  tr.n_active = m;
  tr.stepper = st.stepper;
  tr.alpha = problem.traits.alpha;

  const Field u0 = problem.initial.basis().valid() ? problem.initial : Field::zero(problem.basis);
  Vec y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = u0[i];

  auto record = [&](double t, const Vec& state) {
    Field f = to_field(problem.basis, state);
    const TripleNorms nrm = triple_norms(f);
    double x = 0.0;
    if (!tr.times.empty()) {
      const double prev = std::pow(tr.norms.back().v, tr.alpha);
      x = tr.x_norm.back() + 0.5 * (t - tr.times.back()) * (prev + std::pow(nrm.v, tr.alpha));
    }
    tr.times.push_back(t);
    tr.states.push_back(std::move(f));
    tr.norms.push_back(nrm);
    tr.x_norm.push_back(x);
  };
  auto blown = [&](const Vec& state) {
    return !state.allFinite() || state.norm() > config.blowup_threshold;
  };

  record(0.0, y);
  const double T = config.T;
  const double order = st.stepper == Stepper::semi_implicit ? 1.0 : 2.0;
  try {
    if (config.dt_policy == DtPolicy::fixed) {
      const auto K = static_cast<std::size_t>(std::ceil(T / config.dt - 1e-9));
      double t = 0.0;
      for (std::size_t k = 1; k <= K; ++k) {
        const double t_next = k == K ? T : static_cast<double>(k) * config.dt;
        Vec next = st.step(t, y, t_next - t);
        if (blown(next)) {
          tr.status = RunStatus::blowup;
          tr.message = fmt::format("|u|_H exceeded {:.3g} near t={:.6g}", config.blowup_threshold, t_next);
          break;
        }
        y = std::move(next);
        t = t_next;
        record(t, y);
      }
    } else {
      double t = 0.0;
      double h = config.dt;
      while (T - t > 1e-12 * T) {
        h = std::min(h, T - t);
        if (T - (t + h) < 1e-9 * h) h = T - t;
        const Vec big = st.step(t, y, h);
        const Vec half = st.step(t + 0.5 * h, st.step(t, y, 0.5 * h), 0.5 * h);
        if (blown(half)) {
          tr.status = RunStatus::blowup;
          tr.message = fmt::format("|u|_H exceeded {:.3g} near t={:.6g}", config.blowup_threshold, t + h);
          break;
        }
        const double scale = config.atol + config.rtol * std::max(y.norm(), half.norm());
        const double err = (big - half).norm() / scale;
        const double factor = err > 0.0 ? 0.9 * std::pow(err, -1.0 / (order + 1.0)) : 2.0;
        if (err <= 1.0) {
          y = half;
          t = (T - (t + h) < 1e-12 * T) ? T : t + h;
          record(t, y);
          h *= std::clamp(factor, 0.2, 2.0);
        } else {
          ++tr.rejected_steps;
          h *= std::clamp(factor, 0.2, 0.9);
          if (h < config.dt_min) {
            tr.status = RunStatus::step_failure;
            tr.message = fmt::format("adaptive step fell below dt_min={:.3g} at t={:.6g}", config.dt_min, t);
            break;
          }
        }
      }
    }
  } catch (const StepFailure&) {
    tr.status = RunStatus::step_failure;
    tr.message = fmt::format("stage solve did not converge down to dt_min={:.3g} after t={:.6g}",
                             config.dt_min, tr.times.back());
  } catch (const NumericalFailure& e) {
    tr.status = RunStatus::blowup;
    tr.message = e.what();
  }
  tr.stage_iterations = st.iterations;
  return tr;
}

Field state_at(const Trajectory& trajectory, double t) {
  const auto& ts = trajectory.times;
  if (ts.empty()) throw ConfigurationError("state_at: empty trajectory");
  if (t <= ts.front()) return trajectory.states.front();
  if (t >= ts.back()) return trajectory.states.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  const double s = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return (1.0 - s) * trajectory.states[i - 1] + s * trajectory.states[i];
}

// ---------------------------------------------------------------- energy ledger

double ledger_young_constant(double alpha, double delta) {
  return 2.0 * young_constant(alpha, alpha / (alpha - 1.0), delta / 4.0);
}

EnergyLedger energy_monitor(const Trajectory& trajectory, const EvolutionProblem& problem) {
  const auto& tr = problem.traits;
  const double alpha = tr.alpha;
  const double conj = alpha / (alpha - 1.0);
  EnergyLedger led;
  led.c1 = ledger_young_constant(alpha, tr.delta);
  const std::size_t n = trajectory.size();
  if (n == 0) return led;
  led.times = trajectory.times;

  std::vector<double> forcing(n), op_norm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trajectory.times[k];
    double b = 0.0;
    if (problem.forcing) b = problem.dual_norm(problem.forcing_at(t));
    forcing[k] = tr.f_profile(t) + led.c1 * std::pow(b, conj);
    const Field a = apply(problem, t, trajectory.states[k]);
    const double an = problem.basis.hilbertian() ? problem.dual_norm(a) : dual_norm_surrogate(a);
    op_norm[k] = std::pow(an, conj);
  }
  const double h0 = trajectory.norms.front().h;
  led.rhs = gronwall_bound(h0 * h0, tr.c_coercive, forcing, trajectory.times);
  led.lhs.resize(n);
  led.slack.resize(n);
  led.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double h = trajectory.norms[k].h;
    led.lhs[k] = h * h + 0.5 * tr.delta * trajectory.x_norm[k];
    led.slack[k] = led.rhs[k] - led.lhs[k];
    led.min_slack = std::min(led.min_slack, led.slack[k]);
    led.sup_h = std::max(led.sup_h, h);
  }
  led.x_norm = std::pow(trajectory.x_norm.back(), 1.0 / alpha);
  led.operator_norm = std::pow(trapezoid(trajectory.times, op_norm, n - 1), 1.0 / conj);
  led.K = led.x_norm + led.sup_h + led.operator_norm;
  return led;
}

// ---------------------------------------------------------------- weak residual

double weak_residual(const Trajectory& trajectory, const EvolutionProblem& problem, const Field& v,
                     double t) {
  const auto& ts = trajectory.times;
  std::size_t idx = ts.size();
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (std::abs(ts[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      idx = k;
      break;
    }
  if (idx == ts.size())
    throw ConfigurationError(fmt::format("weak_residual: t={} is not a recorded time", t));
  if (!v.basis().same_as(problem.basis)) throw BasisMismatch("weak_residual: test function basis differs");
  const std::size_t m = trajectory.n_active;
  std::vector<double> integrand(idx + 1);
  for (std::size_t k = 0; k <= idx; ++k) {
    Field a = apply(problem, ts[k], trajectory.states[k]);
    if (problem.forcing) a += problem.forcing_at(ts[k]);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i] * v[i];
    integrand[k] = s;
  }
  const double lhs = pairing(trajectory.states[idx], v) - pairing(trajectory.states[0], v);
  return std::abs(lhs - trapezoid(ts, integrand, idx));
}

// ---------------------------------------------------------------- convergence

bool ConvergenceTable::decreasing() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) return false;
    if (i > 0 && !(rows[i].distance < rows[i - 1].distance)) return false;
  }
  return true;
}

ConvergenceTable convergence_study(const EvolutionProblem& problem, const SolverConfig& base,
                                   const std::vector<std::size_t>& n_list) {
  if (n_list.size() < 2) throw ConfigurationError("convergence_study needs at least two values of n");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1])) throw ConfigurationError("convergence_study: n_list must be increasing");
  for (std::size_t n : n_list)
    if (n == 0 || n > problem.basis.size())
      throw ConfigurationError(fmt::format("convergence_study: n={} outside 1..{}", n, problem.basis.size()));

  std::vector<Trajectory> runs(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t i) {
    SolverConfig cfg = base;
    cfg.n = n_list[i];
    runs[i] = solve(problem, cfg);
  });

  ConvergenceTable table;
  table.n_list = n_list;
  const double alpha = problem.traits.alpha;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    ConvergenceRow row;
    row.n_coarse = n_list[i];
    row.n_fine = n_list[i + 1];
    const auto& a = runs[i];
    const auto& b = runs[i + 1];
    if (!a.ok() || !b.ok()) {
      row.ok = false;
      row.distance = std::numeric_limits<double>::quiet_NaN();
      row.message = fmt::format("n={}: {} {}", a.ok() ? n_list[i + 1] : n_list[i],
                                to_string(a.ok() ? b.status : a.status), a.ok() ? b.message : a.message);
    } else {
      std::vector<double> d(a.size());
      for (std::size_t k = 0; k < a.size(); ++k)
        d[k] = std::pow(norm(a.states[k] - state_at(b, a.times[k]), NormKind::H), alpha);
      row.distance = std::pow(trapezoid(a.times, d, a.size() - 1), 1.0 / alpha);
    }
    table.rows.push_back(row);
  }
  return table;
}

// ---------------------------------------------------------------- dependence

DependenceReport dependence_experiment(const EvolutionProblem& problem, const Field& u1_0,
                                       const Field& u2_0, const ForcingFunction& b1,
                                       const ForcingFunction& b2, const SolverConfig& config) {
  std::array<EvolutionProblem, 2> pbs{problem, problem};
  pbs[0].initial = u1_0;
  pbs[0].forcing = b1;
  pbs[1].initial = u2_0;
  pbs[1].forcing = b2;
  std::array<Trajectory, 2> runs;
  parallel_for(2, [&](std::size_t i) { runs[i] = solve(pbs[i], config); });

  DependenceReport rep;
  for (int i = 0; i < 2; ++i)
    if (!runs[i].ok()) {
      rep.ok = false;
      rep.holds = false;
      rep.message = fmt::format("run {} failed: {} ({})", i + 1, to_string(runs[i].status), runs[i].message);
      return rep;
    }

  const auto& tr = problem.traits;
  const auto& r1 = runs[0];
  const std::size_t n = r1.size();
  rep.times = r1.times;
  std::vector<double> weight(n), db(n);
  bool b_differ = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = r1.times[k];
    const Field u2 = state_at(runs[1], t);
    const double diff = norm(r1.states[k] - u2, NormKind::H);
    rep.lhs.push_back(diff * diff);
    weight[k] = 2.0 * (tr.c_monotone + tr.rho(r1.states[k]) + tr.eta(u2));
    const std::size_t N = problem.basis.size();
    const auto f1 = b1 ? b1(t) : std::vector<double>(N, 0.0);
    const auto f2 = b2 ? b2(t) : std::vector<double>(N, 0.0);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += (f1[i] - f2[i]) * (f1[i] - f2[i]);
    db[k] = s;
    b_differ = b_differ || s > 0.0;
  }
  if (b_differ)
    for (double& w : weight) w += 1.0;
  const double d0 = rep.lhs.front();
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double e = trapezoid(rep.times, weight, k);
    rep.exponent.push_back(e);
    rep.rhs.push_back(std::exp(e) * (d0 + trapezoid(rep.times, db, k)));
    const double slack = rep.rhs[k] - rep.lhs[k];
    rep.min_slack = std::min(rep.min_slack, slack);
    if (std::isfinite(rep.rhs[k])) {
      if (slack < -kSlackTolerance * std::max({1.0, rep.lhs[k], rep.rhs[k]})) rep.holds = false;
    } else if (!std::isfinite(e)) {
      rep.holds = false;
    } else {
      // exp(e) overflows a double; compare logarithms instead
      const double base = d0 + trapezoid(rep.times, db, k);
      if (rep.lhs[k] > 0.0 && (base <= 0.0 || std::log(rep.lhs[k]) > e + std::log(base) + kSlackTolerance))
        rep.holds = false;
    }
  }
  rep.factor = std::exp(rep.exponent.back());
  if (!std::isfinite(rep.exponent.back())) {
    rep.holds = false;
    rep.message = "exponent integral is not finite";
  } else if (!std::isfinite(rep.factor)) {
    rep.message = fmt::format("factor exp({}) exceeds double range; bound checked in log space",
                              rep.exponent.back());
  }
  return rep;
}

}  // namespace monoevo
