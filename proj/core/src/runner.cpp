#include "monoevo/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>

#include "monoevo/catalog.hpp"
#include "monoevo/csv.hpp"
#include "monoevo/error.hpp"

namespace monoevo {

std::string to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::pass: return "pass";
    case TaskStatus::fail: return "fail";
    case TaskStatus::skipped: return "skipped";
    case TaskStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

namespace {

constexpr double kLedgerTolerance = 1e-8;

std::string constants_cell(const std::map<std::string, double>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += fmt::format("{}{}={}", s.empty() ? "" : ";", k, format_real(v));
  return s;
}

std::string inputs_cell(const ConditionReport& r) {
  for (const auto& v : r.violations)
    if (v.sample == r.worst_sample) {
      std::string s;
      for (const auto& [k, x] : v.inputs) s += fmt::format("{}{}={}", s.empty() ? "" : ";", k, format_real(x));
      return s;
    }
  return "";
}

struct Summary {
  CsvTable table{{"key", "value"}, {}};
  void add(const std::string& k, const std::string& v) { table.add_row({k, v}); }
  void add(const std::string& k, double v) { add(k, format_real(v)); }
};

class Runner {
 public:
  explicit Runner(const RunConfig& c) : cfg_(c), problem_(make_problem(c)) {
    SamplerConfig sc = cfg_.checks.sampler;
    sc.seed = cfg_.seed;
    sampler_.emplace(problem_.basis, sc);
    report_.equation = cfg_.equation;
    report_.seed = cfg_.seed;
    report_.output_dir = cfg_.output_dir;
  }

  RunReport run() {
    std::filesystem::create_directories(cfg_.output_dir);
    for (const auto& task : cfg_.tasks) {
      const auto start = std::chrono::steady_clock::now();
      TaskResult r;
      r.task = task;
      try {
        dispatch(task, r);
      } catch (const NumericalFailure& e) {
        r.status = TaskStatus::numerical_failure;
        r.detail = e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report_.tasks.push_back(r);
      flush();
    }
    report_.exit_code = 0;
    for (const auto& t : report_.tasks)
      if (t.status == TaskStatus::numerical_failure) report_.exit_code = 2;
    if (report_.exit_code == 0)
      for (const auto& t : report_.tasks)
        if (t.status == TaskStatus::fail) report_.exit_code = 3;
    flush();
    return report_;
  }

 private:
  const RunConfig& cfg_;
  EvolutionProblem problem_;
  std::optional<FieldSampler> sampler_;
  RunReport report_;
  std::optional<Trajectory> trajectory_;
  std::optional<EnergyLedger> ledger_;
  CsvTable checks_{{"condition", "samples", "min_slack", "fitted_constants", "status", "worst_sample",
                    "violations", "surrogate", "worst_inputs"},
                   {}};
  std::optional<CsvTable> convergence_;
  std::optional<CsvTable> dependence_;
  Summary summary_;
  bool ledger_written_ = false;

  void dispatch(const std::string& task, TaskResult& r) {
    if (task.rfind("check_", 0) == 0) return run_check(task, r);
    if (task == "solve") return run_solve(r);
    if (task == "energy") return run_energy(r);
    if (task == "convergence") return run_convergence(r);
    if (task == "dependence") return run_dependence(r);
    throw ConfigurationError(fmt::format("tasks: unknown task '{}'", task));
  }

  void run_check(const std::string& task, TaskResult& r) {
    const double t = cfg_.checks.time;
    const std::size_t n = cfg_.checks.samples;
    ConditionReport rep;
    if (task == "check_h1") {
      HemicontinuityOptions opt;
      opt.tolerance = cfg_.checks.h1_tolerance;
      const std::size_t n1 = cfg_.checks.h1_samples ? cfg_.checks.h1_samples : n;
      rep = check_hemicontinuity(problem_, t, *sampler_, n1, opt);
    } else if (task == "check_h2") {
      rep = check_local_monotonicity(problem_, t, *sampler_, n);
    } else if (task == "check_h3") {
      rep = check_coercivity(problem_, t, *sampler_, n);
    } else if (task == "check_h4") {
      rep = check_growth(problem_, t, *sampler_, n);
    } else {
      rep = check_uniqueness_growth(problem_.traits, *sampler_, n);
    }
    r.status = rep.status == CheckStatus::pass   ? TaskStatus::pass
               : rep.status == CheckStatus::fail ? TaskStatus::fail
                                                 : TaskStatus::skipped;
    r.detail = rep.status == CheckStatus::skipped
                   ? rep.note
                   : fmt::format("min_slack={} violations={}", format_real(rep.min_slack), rep.violations.size());
    checks_.add_row({to_string(rep.condition), std::to_string(rep.samples), format_real(rep.min_slack),
                     constants_cell(rep.fitted_constants), to_string(rep.status),
                     std::to_string(rep.worst_sample), std::to_string(rep.violations.size()),
                     rep.surrogate ? "1" : "0", inputs_cell(rep)});
    report_.checks.push_back(std::move(rep));
  }

  void ensure_trajectory() {
    if (trajectory_) return;
    trajectory_ = solve(problem_, cfg_.solver);
    try {
      ledger_ = energy_monitor(*trajectory_, problem_);
    } catch (const NumericalFailure&) {
      ledger_.reset();
    }
    write_trajectory();
  }

  void run_solve(TaskResult& r) {
    trajectory_.reset();
    ensure_trajectory();
    const auto& tr = *trajectory_;
    if (!tr.ok()) {
      r.status = TaskStatus::numerical_failure;
      r.detail = fmt::format("{}: {}", to_string(tr.status), tr.message);
    } else {
      r.detail = fmt::format("steps={} final_norm_H={}", tr.size() - 1, format_real(tr.norms.back().h));
    }
    summary_.add("solve.status", to_string(tr.status));
    summary_.add("solve.stepper", to_string(tr.stepper));
    summary_.add("solve.final_t", tr.times.back());
    summary_.add("solve.final_norm_H", tr.norms.back().h);
    summary_.add("solve.final_norm_V", tr.norms.back().v);
  }

  void run_energy(TaskResult& r) {
    ensure_trajectory();
    if (!trajectory_->ok() || !ledger_) {
      r.status = TaskStatus::skipped;
      r.detail = "trajectory did not complete; ledger not evaluated";
      return;
    }
    const auto& led = *ledger_;
    CsvTable t{{"t", "lhs", "rhs", "slack"}, {}};
    for (std::size_t k = 0; k < led.times.size(); ++k)
      t.add_row({format_real(led.times[k]), format_real(led.lhs[k]), format_real(led.rhs[k]),
                 format_real(led.slack[k])});
    write_csv(cfg_.output_dir / "ledger.csv", t);
    ledger_written_ = true;
    const bool ok = led.min_slack >= -kLedgerTolerance;
    r.status = ok ? TaskStatus::pass : TaskStatus::fail;
    r.detail = fmt::format("min_slack={} K={}", format_real(led.min_slack), format_real(led.K));
    summary_.add("energy.min_slack", led.min_slack);
    summary_.add("energy.C1", led.c1);
    summary_.add("energy.x_norm", led.x_norm);
    summary_.add("energy.sup_H", led.sup_h);
    summary_.add("energy.operator_norm", led.operator_norm);
    summary_.add("energy.K", led.K);
  }

  void run_convergence(TaskResult& r) {
    const auto table = convergence_study(problem_, cfg_.solver, cfg_.convergence_n);
    CsvTable t{{"n_coarse", "n_fine", "distance", "ok"}, {}};
    bool failed = false;
    for (const auto& row : table.rows) {
      t.add_row({std::to_string(row.n_coarse), std::to_string(row.n_fine), format_real(row.distance),
                 row.ok ? "1" : "0"});
      failed = failed || !row.ok;
    }
    convergence_ = t;
    if (failed) {
      r.status = TaskStatus::numerical_failure;
      for (const auto& row : table.rows)
        if (!row.ok) r.detail = row.message;
    } else {
      r.status = table.decreasing() ? TaskStatus::pass : TaskStatus::fail;
      r.detail = fmt::format("final_distance={}", format_real(table.rows.back().distance));
    }
    if (!table.rows.empty()) summary_.add("convergence.final_distance", table.rows.back().distance);
  }

  void run_dependence(TaskResult& r) {
    const Field u2 = problem_.initial.basis().valid() ? problem_.initial : Field::zero(problem_.basis);
    const Field u1 = (1.0 + cfg_.dependence.perturbation) * u2;
    auto forcing = [&](const std::string& spec) -> ForcingFunction {
      if (spec.empty()) return problem_.forcing;
      const ForcingSpec f = ForcingSpec::parse(spec);
      if (f.is_zero()) return {};
      auto c = f.coefficients(problem_.basis);
      return [c](double) { return c; };
    };
    const auto rep = dependence_experiment(problem_, u1, u2, forcing(cfg_.dependence.forcing1),
                                           forcing(cfg_.dependence.forcing2), cfg_.solver);
    if (!rep.ok) {
      r.status = TaskStatus::numerical_failure;
      r.detail = rep.message;
      return;
    }
    CsvTable t{{"t", "lhs", "rhs", "exponent", "slack"}, {}};
    for (std::size_t k = 0; k < rep.times.size(); ++k)
      t.add_row({format_real(rep.times[k]), format_real(rep.lhs[k]), format_real(rep.rhs[k]),
                 format_real(rep.exponent[k]), format_real(rep.rhs[k] - rep.lhs[k])});
    dependence_ = t;
    r.status = rep.holds ? TaskStatus::pass : TaskStatus::fail;
    r.detail = fmt::format("factor={} log_factor={} min_slack={}", format_real(rep.factor),
                           format_real(rep.exponent.back()), format_real(rep.min_slack));
    if (!rep.message.empty()) r.detail += " (" + rep.message + ")";
    summary_.add("dependence.factor", rep.factor);
    summary_.add("dependence.log_factor", rep.exponent.back());
    summary_.add("dependence.min_slack", rep.min_slack);
  }

  void write_trajectory() {
    const auto& tr = *trajectory_;
    CsvTable t{{"t", "norm_H", "norm_V", "x_norm", "ledger_lhs", "ledger_rhs", "slack"}, {}};
    const std::string nan = format_real(std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < tr.size(); ++k) {
      std::vector<std::string> row{format_real(tr.times[k]), format_real(tr.norms[k].h),
                                   format_real(tr.norms[k].v), format_real(tr.x_norm[k])};
      if (ledger_) {
        row.push_back(format_real(ledger_->lhs[k]));
        row.push_back(format_real(ledger_->rhs[k]));
        row.push_back(format_real(ledger_->slack[k]));
      } else {
        row.insert(row.end(), {nan, nan, nan});
      }
      t.add_row(std::move(row));
    }
    write_csv(cfg_.output_dir / "trajectory.csv", t);
  }

  void flush() {
    const auto& dir = cfg_.output_dir;
    std::set<std::string> files;
    if (trajectory_) files.insert("trajectory.csv");
    if (ledger_written_) files.insert("ledger.csv");
    if (checks_.rows.size()) {
      write_csv(dir / "checks.csv", checks_);
      files.insert("checks.csv");
    }
    if (convergence_) {
      write_csv(dir / "convergence.csv", *convergence_);
      files.insert("convergence.csv");
    }
    if (dependence_) {
      write_csv(dir / "dependence.csv", *dependence_);
      files.insert("dependence.csv");
    }
    CsvTable tasks{{"task", "status", "detail"}, {}};
    CsvTable timing{{"task", "seconds"}, {}};
    for (const auto& t : report_.tasks) {
      std::string detail = t.detail;
      std::replace(detail.begin(), detail.end(), ',', ';');
      std::replace(detail.begin(), detail.end(), '\n', ' ');
      tasks.add_row({t.task, to_string(t.status), detail});
      timing.add_row({t.task, format_real(t.seconds)});
    }
    write_csv(dir / "tasks.csv", tasks);
    write_csv(dir / "timing.csv", timing);
    write_csv(dir / "summary.csv", summary_.table);
    files.insert({"tasks.csv", "timing.csv", "summary.csv", "report.txt"});
    report_.manifest.clear();
    for (const auto& f : files) report_.manifest.push_back(dir / f);
    write_report(tasks, timing);
  }

  void write_report(const CsvTable& tasks, const CsvTable& timing) {
    std::ofstream out(cfg_.output_dir / "report.txt", std::ios::binary | std::ios::trunc);
    out << "monoevo run report\n";
    out << "equation: " << cfg_.equation << "\n";
    out << "seed: " << cfg_.seed << "\n";
    out << "exit_code: " << report_.exit_code << "\n\n";
    out << "tasks (status, detail, seconds):\n";
    for (std::size_t i = 0; i < tasks.rows.size(); ++i)
      out << fmt::format("  {:<12} {:<18} {}  [{} s]\n", tasks.rows[i][0], tasks.rows[i][1], tasks.rows[i][2],
                         timing.rows[i][1]);
    if (!checks_.rows.empty()) {
      out << "\nchecks (condition, status, min_slack, fitted constants, worst sample):\n";
      for (const auto& row : checks_.rows)
        out << fmt::format("  {} {} {} {} #{}\n", row[0], row[4], row[2], row[3], row[5]);
    }
    if (!summary_.table.rows.empty()) {
      out << "\nsummary:\n";
      for (const auto& row : summary_.table.rows) out << fmt::format("  {} = {}\n", row[0], row[1]);
    }
    out << "\nfiles:\n";
    for (const auto& f : report_.manifest) out << "  " << f.filename().string() << "\n";
    out << "\nconfig:\n" << cfg_.source;
    if (!cfg_.source.empty() && cfg_.source.back() != '\n') out << "\n";
  }
};

// ---------------------------------------------------------------- compare

std::optional<double> to_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

// "a=1;b=2" -> {a: 1, b: 2}; nullopt when the cell is not of that shape
std::optional<std::map<std::string, double>> to_pairs(const std::string& s) {
  if (s.find('=') == std::string::npos) return std::nullopt;
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto end = std::min(s.find(';', pos), s.size());
    const std::string item = s.substr(pos, end - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos) return std::nullopt;
    const auto v = to_number(item.substr(eq + 1));
    if (!v) return std::nullopt;
    out[item.substr(0, eq)] = *v;
    pos = end + 1;
  }
  return out;
}

double cell_drift(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return 0.0;
  if (a == b) return 0.0;
  const double d = std::abs(a - b);
  return std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
}

void compare_cells(const std::string& a, const std::string& b, const std::string& column,
                   std::map<std::string, double>& drift) {
  const auto na = to_number(a), nb = to_number(b);
  if (na && nb) {
    drift[column] = std::max(drift[column], cell_drift(*na, *nb));
    return;
  }
  const auto pa = to_pairs(a), pb = to_pairs(b);
  if (pa && pb) {
    for (const auto& [k, v] : *pa) {
      const auto it = pb->find(k);
      const std::string sub = column + "." + k;
      drift[sub] = std::max(drift[sub], it == pb->end() ? std::numeric_limits<double>::infinity()
                                                        : cell_drift(v, it->second));
    }
    for (const auto& [k, v] : *pb)
      if (!pa->count(k)) drift[column + "." + k] = std::numeric_limits<double>::infinity();
    return;
  }
  drift[column] = std::max(drift[column], a == b ? 0.0 : std::numeric_limits<double>::infinity());
}

std::set<std::string> csv_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw SchemaMismatch(fmt::format("{} is not a run directory", dir.string()));
  std::set<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv" && e.path().filename() != "timing.csv")
      out.insert(e.path().filename().string());
  return out;
}

}  // namespace

RunReport run(const RunConfig& config) { return Runner(config).run(); }

DriftSummary compare_runs(const std::filesystem::path& a, const std::filesystem::path& b) {
  const auto fa = csv_files(a), fb = csv_files(b);
  if (fa != fb) {
    std::string only;
    for (const auto& f : fa)
      if (!fb.count(f)) only += " " + f + " (only in first)";
    for (const auto& f : fb)
      if (!fa.count(f)) only += " " + f + " (only in second)";
    throw SchemaMismatch(fmt::format("run directories hold different files:{}", only));
  }
  DriftSummary summary;
  for (const auto& file : fa) {
    const CsvTable ta = read_csv(a / file), tb = read_csv(b / file);
    if (ta.header != tb.header) throw SchemaMismatch(fmt::format("{}: headers differ", file));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const auto tcol = ta.column("t");
    if (tcol >= 0) {
      // align rows by time
      std::size_t j = 0;
      for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        const double t = to_number(ta.rows[i][tcol]).value_or(std::nan(""));
        while (j < tb.rows.size() &&
               to_number(tb.rows[j][tcol]).value_or(std::nan("")) < t - 1e-12 * std::max(1.0, std::abs(t)))
          ++j;
        if (j < tb.rows.size() &&
            std::abs(to_number(tb.rows[j][tcol]).value_or(std::nan("")) - t) <= 1e-12 * std::max(1.0, std::abs(t)))
          pairs.emplace_back(i, j);
      }
      if (pairs.empty() && !ta.rows.empty()) throw SchemaMismatch(fmt::format("{}: no common times", file));
    } else {
      if (ta.rows.size() != tb.rows.size())
        throw SchemaMismatch(fmt::format("{}: {} rows vs {} rows", file, ta.rows.size(), tb.rows.size()));
      for (std::size_t i = 0; i < ta.rows.size(); ++i) pairs.emplace_back(i, i);
    }
    std::map<std::string, double> drift;
    for (const auto& h : ta.header) drift[h] = 0.0;
    for (const auto& [i, j] : pairs)
      for (std::size_t c = 0; c < ta.header.size(); ++c) compare_cells(ta.rows[i][c], tb.rows[j][c], ta.header[c], drift);
    for (const auto& [col, d] : drift) {
      summary.drifts.push_back({file, col, d});
      summary.max_abs = std::max(summary.max_abs, d);
    }
  }
  return summary;
}

}  // namespace monoevo
