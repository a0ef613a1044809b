#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "monoevo/catalog.hpp"
#include "monoevo/error.hpp"
#include "monoevo/runner.hpp"

namespace monoevo {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_plain(const std::string& s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigurationError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
  return v;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_real_literal(item, key));
  if (out.empty()) throw ConfigurationError(fmt::format("{}: expected a comma-separated list of reals", key));
  return out;
}

using KeySet = std::set<std::string>;

const KeySet& params_keys(const std::string& equation) {
  static const std::map<std::string, KeySet> keys{
      {"burgers", {"F", "g", "h", "t_exp", "C_lip"}},
      {"reaction_diffusion", {"F", "g", "h", "t_exp", "C_lip"}},
      {"advection_diffusion_2d", {"f", "g", "h", "r", "t_exp"}},
      {"advection_diffusion_3d", {"f", "g", "h", "r", "t_exp", "l6_constant"}},
      {"p_laplace", {"p", "g", "h", "r", "s", "t_exp"}},
      {"nse_2d", {"nu", "f"}},
      {"leray_alpha_3d", {"nu", "alpha_smooth", "f"}},
  };
  return keys.at(equation);
}

const std::map<std::string, KeySet>& section_keys() {
  static const std::map<std::string, KeySet> keys{
      {"basis", {"domain", "L", "lengths", "n", "grid"}},
      {"initial", {"kind", "mode", "amplitude", "radius", "decay", "count"}},
      {"solver", {"n", "T", "dt", "stepper", "dt_policy", "atol", "rtol", "stage_tol",
                  "max_stage_iterations", "dt_min"}},
      {"checks", {"samples", "h1_samples", "radii", "decay", "time", "h1_tolerance"}},
      {"traits", {"alpha", "beta", "delta", "c_monotone", "c_coercive", "c_growth", "f", "margin",
                  "margin_exponent", "gamma", "c_uniqueness"}},
      {"dependence", {"perturbation", "forcing1", "forcing2"}},
      {"convergence", {"n_list"}},
      {"params", {}},
  };
  return keys;
}

void apply_basis_defaults(RunConfig& c) {
  auto& b = c.basis;
  const std::string& eq = c.equation;
  const double two_pi = 2.0 * std::numbers::pi;
  std::string domain = "interval";
  std::vector<double> lengths{std::numbers::pi};
  int n = 16;
  if (eq == "advection_diffusion_2d") {
    domain = "box";
    lengths = {std::numbers::pi, std::numbers::pi};
    n = 8;
  } else if (eq == "nse_2d") {
    domain = "torus";
    lengths = {two_pi};
    n = 8;
  } else if (eq == "advection_diffusion_3d" || eq == "leray_alpha_3d") {
    domain = "torus";
    lengths = {two_pi};
    n = 3;
  }
  if (b.domain.empty()) b.domain = domain;
  if (b.lengths.empty()) b.lengths = b.domain == domain ? lengths : std::vector<double>{};
  if (b.lengths.empty()) b.lengths = b.domain == "box" ? std::vector<double>{std::numbers::pi, std::numbers::pi}
                                     : b.domain == "torus" ? std::vector<double>{two_pi}
                                                           : std::vector<double>{std::numbers::pi};
  if (b.n == 0) b.n = n;
}

GridPolicy parse_grid(const std::string& s) {
  if (s == "quartic_exact") return GridPolicy::quartic_exact;
  if (s == "three_halves") return GridPolicy::three_halves;
  if (s == "unpadded") return GridPolicy::unpadded;
  throw ConfigurationError(
      fmt::format("basis.grid: unknown policy '{}' (known: quartic_exact, three_halves, unpadded)", s));
}

std::string param_or(const RunConfig& c, const std::string& key, const std::string& fallback) {
  const auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

double real_param(const RunConfig& c, const std::string& key, double fallback) {
  const auto it = c.params.find(key);
  return it == c.params.end() ? fallback : parse_real_literal(it->second, "params." + key);
}

ScalarFunction fn_param(const RunConfig& c, const std::string& key, const std::string& fallback) {
  try {
    return ScalarFunction::parse(param_or(c, key, fallback));
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(fmt::format("params.{}: {}", key, e.what()));
  }
}

ForcingSpec forcing_param(const RunConfig& c, const std::string& key) {
  try {
    return ForcingSpec::parse(param_or(c, key, "none"));
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(fmt::format("params.{}: {}", key, e.what()));
  }
}

int torus_dims(const std::string& eq) { return eq == "nse_2d" ? 2 : 3; }

Basis build_basis(const RunConfig& c) {
  const auto& b = c.basis;
  if (b.n < 1) throw ConfigurationError(fmt::format("basis.n: must be >= 1, got {}", b.n));
  if (b.domain == "interval") {
    if (b.lengths.size() != 1) throw ConfigurationError("basis.L: interval needs one length");
    return build_sine_basis(b.lengths[0], b.n, b.grid);
  }
  if (b.domain == "box") {
    if (b.lengths.size() != 2) throw ConfigurationError("basis.lengths: box needs two lengths");
    return build_sine_basis(Domain::box(b.lengths[0], b.lengths[1]), b.n, b.grid);
  }
  if (b.domain == "torus") {
    if (b.lengths.size() != 1) throw ConfigurationError("basis.L: torus needs one length");
    const bool vec = c.equation == "nse_2d" || c.equation == "leray_alpha_3d";
    const int d = c.equation == "advection_diffusion_2d" ? 2 : torus_dims(c.equation);
    return build_fourier_basis(Domain::torus(d, b.lengths[0]), b.n, vec, b.grid);
  }
  throw ConfigurationError(
      fmt::format("basis.domain: unknown domain '{}' (known: interval, box, torus)", b.domain));
}

EvolutionProblem build_equation(const RunConfig& c, const Basis& basis) {
  const std::string& eq = c.equation;
  if (eq == "burgers" || eq == "reaction_diffusion") {
    BurgersRDParams p;
    const bool burgers = eq == "burgers";
    p.F = fn_param(c, "F", burgers ? "quadratic:1" : "none");
    p.g = fn_param(c, "g", burgers ? "none" : "allen_cahn");
    p.h = forcing_param(c, "h");
    p.t_exp = real_param(c, "t_exp", 2.0);
    p.C_lip = real_param(c, "C_lip", 0.0);
    return burgers_rd_1d(p, basis);
  }
  if (eq == "advection_diffusion_2d" || eq == "advection_diffusion_3d") {
    AdvectionDiffusionParams p;
    p.d = eq == "advection_diffusion_2d" ? 2 : 3;
    const auto fs = split_list(param_or(c, "f", ""));
    if (fs.empty()) {
      p.f.assign(p.d, ScalarFunction(ScalarKind::tanh, 1.0));
    } else {
      for (const auto& s : fs) {
        try {
          p.f.push_back(ScalarFunction::parse(s));
        } catch (const ConfigurationError& e) {
          throw ConfigurationError(fmt::format("params.f: {}", e.what()));
        }
      }
      if (p.f.size() == 1) p.f.assign(p.d, p.f.front());
    }
    p.g = fn_param(c, "g", "signed_square");
    p.h = forcing_param(c, "h");
    p.r = real_param(c, "r", 7.0 / 3.0);
    p.t_exp = real_param(c, "t_exp", 2.0);
    p.l6_constant = real_param(c, "l6_constant", 1.0);
    return advection_diffusion(p, basis);
  }
  if (eq == "p_laplace") {
    PLaplaceParams p;
    p.p = real_param(c, "p", 4.0);
    p.g = fn_param(c, "g", "none");
    p.h = forcing_param(c, "h");
    p.r = real_param(c, "r", 0.0);
    p.s = real_param(c, "s", 2.0);
    p.t_exp = real_param(c, "t_exp", 2.0);
    return p_laplace(p, basis);
  }
  if (eq == "nse_2d") {
    NSEParams p;
    p.nu = real_param(c, "nu", 0.5);
    p.f = forcing_param(c, "f");
    return navier_stokes_2d(p, basis);
  }
  LerayAlphaParams p;
  p.nu = real_param(c, "nu", 0.5);
  p.alpha_smooth = real_param(c, "alpha_smooth", 1.0);
  p.f = forcing_param(c, "f");
  return leray_alpha_3d(p, basis);
}

Field build_initial(const RunConfig& c, const Basis& basis) {
  const auto& in = c.initial;
  if (in.kind == "zero") return Field::zero(basis);
  if (in.kind == "mode") {
    if (in.mode < 1 || in.mode > basis.size())
      throw ConfigurationError(fmt::format("initial.mode: {} outside 1..{}", in.mode, basis.size()));
    return Field::mode(basis, in.mode - 1, in.amplitude);
  }
  if (in.kind == "random") {
    SamplerConfig sc = c.checks.sampler;
    sc.seed = c.seed;
    return FieldSampler(basis, sc).draw_with_norm(0, 7, in.radius);
  }
  if (in.kind == "power_law") {
    if (in.count < 1 || in.count > basis.size())
      throw ConfigurationError(fmt::format("initial.count: {} outside 1..{}", in.count, basis.size()));
    std::vector<double> coeffs(basis.size(), 0.0);
    for (std::size_t k = 1; k <= in.count; ++k)
      coeffs[k - 1] = in.amplitude * std::pow(static_cast<double>(k), -in.decay);
    return Field(basis, std::move(coeffs));
  }
  if (in.kind == "taylor_green") return taylor_green(basis, in.amplitude);
  throw ConfigurationError(fmt::format(
      "initial.kind: unknown kind '{}' (known: zero, mode, random, power_law, taylor_green)", in.kind));
}

void apply_overrides(const RunConfig& c, OperatorTraits& tr) {
  for (const auto& [key, value] : c.trait_overrides) {
    if (key == "alpha") tr.alpha = value;
    else if (key == "beta") tr.beta = value;
    else if (key == "delta") tr.delta = value;
    else if (key == "c_monotone") tr.c_monotone = value;
    else if (key == "c_coercive") tr.c_coercive = value;
    else if (key == "c_growth") tr.c_growth = value;
    else if (key == "f") tr.f_profile = TimeProfile::constant(value);
    else if (key == "margin") tr.margin.coefficient = value;
    else if (key == "margin_exponent") tr.margin.exponent = value;
  }
  const auto g = c.trait_overrides.find("gamma");
  const auto k = c.trait_overrides.find("c_uniqueness");
  if (g != c.trait_overrides.end() || k != c.trait_overrides.end()) {
    UniquenessBound u = tr.uniqueness.value_or(UniquenessBound{});
    if (g != c.trait_overrides.end()) u.gamma = g->second;
    if (k != c.trait_overrides.end()) u.c_const = k->second;
    tr.uniqueness = u;
  }
  try {
    tr.validate();
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(fmt::format("traits: {}", e.what()));
  }
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"check_h1", "check_h2", "check_h3",    "check_h4",  "check_c3",
                                              "solve",    "energy",   "convergence", "dependence"};
  return names;
}

double parse_real_literal(const std::string& text, const std::string& key_path) {
  std::string s = trim(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  double v = 0.0;
  if (parse_plain(s, v)) return v;
  const double pi = std::numbers::pi;
  if (s == "pi") return pi;
  if (s.size() > 3 && s.substr(s.size() - 3) == "*pi" && parse_plain(s.substr(0, s.size() - 3), v))
    return v * pi;
  if (s.size() > 3 && s.substr(0, 3) == "pi/" && parse_plain(s.substr(3), v) && v != 0.0) return pi / v;
  throw ConfigurationError(fmt::format("{}: expected a real (or pi, a*pi, pi/b), got '{}'", key_path, text));
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigurationError(fmt::format("config: {}", e.message()));
  }

  RunConfig c;
  c.source = text;
  const auto& sections = section_keys();
  std::map<std::string, const pt::ptree*> present;
  for (const auto& [key, node] : tree) {
    if (sections.count(key)) {
      present[key] = &node;
      continue;
    }
    if (!node.empty())
      throw ConfigurationError(fmt::format("config: unknown section [{}]", key));
    const std::string value = trim(node.data());
    if (key == "equation") c.equation = value;
    else if (key == "tasks") c.tasks = split_list(value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "seed") c.seed = parse_unsigned(value, "seed");
    else
      throw ConfigurationError(fmt::format(
          "{}: unknown key (top-level keys: equation, tasks, output_dir, seed)", key));
  }

  const auto& names = catalog_names();
  if (c.equation.empty())
    throw ConfigurationError(fmt::format("equation: missing (catalog: {})", fmt::join(names, ", ")));
  if (std::find(names.begin(), names.end(), c.equation) == names.end())
    throw ConfigurationError(fmt::format("equation: '{}' is not in the catalog ({})", c.equation,
                                         fmt::join(names, ", ")));
  if (c.tasks.empty()) throw ConfigurationError("tasks: at least one task is required");
  for (const auto& t : c.tasks)
    if (std::find(task_names().begin(), task_names().end(), t) == task_names().end())
      throw ConfigurationError(
          fmt::format("tasks: unknown task '{}' (known: {})", t, fmt::join(task_names(), ", ")));

  for (const auto& [section, node] : present) {
    const KeySet& allowed = section == "params" ? params_keys(c.equation) : sections.at(section);
    for (const auto& [key, child] : *node) {
      const std::string path = section + "." + key;
      if (!allowed.count(key))
        throw ConfigurationError(fmt::format("{}: unknown key (allowed: {})", path, fmt::join(allowed, ", ")));
      const std::string v = trim(child.data());
      if (section == "params") {
        c.params[key] = v;
      } else if (section == "basis") {
        if (key == "domain") c.basis.domain = v;
        else if (key == "L") c.basis.lengths = {parse_real_literal(v, path)};
        else if (key == "lengths") c.basis.lengths = parse_real_list(v, path);
        else if (key == "n") c.basis.n = static_cast<int>(parse_unsigned(v, path));
        else if (key == "grid") c.basis.grid = parse_grid(v);
      } else if (section == "initial") {
        if (key == "kind") c.initial.kind = v;
        else if (key == "mode") c.initial.mode = parse_unsigned(v, path);
        else if (key == "amplitude") c.initial.amplitude = parse_real_literal(v, path);
        else if (key == "radius") c.initial.radius = parse_real_literal(v, path);
        else if (key == "decay") c.initial.decay = parse_real_literal(v, path);
        else if (key == "count") c.initial.count = parse_unsigned(v, path);
      } else if (section == "solver") {
        auto& s = c.solver;
        if (key == "n") s.n = parse_unsigned(v, path);
        else if (key == "T") s.T = parse_real_literal(v, path);
        else if (key == "dt") s.dt = parse_real_literal(v, path);
        else if (key == "stepper") s.stepper = parse_stepper(v);
        else if (key == "dt_policy") s.dt_policy = parse_dt_policy(v);
        else if (key == "atol") s.atol = parse_real_literal(v, path);
        else if (key == "rtol") s.rtol = parse_real_literal(v, path);
        else if (key == "stage_tol") s.stage_tol = parse_real_literal(v, path);
        else if (key == "max_stage_iterations") s.max_stage_iterations = static_cast<int>(parse_unsigned(v, path));
        else if (key == "dt_min") s.dt_min = parse_real_literal(v, path);
      } else if (section == "checks") {
        auto& k = c.checks;
        if (key == "samples") k.samples = parse_unsigned(v, path);
        else if (key == "h1_samples") k.h1_samples = parse_unsigned(v, path);
        else if (key == "radii") k.sampler.radii = parse_real_list(v, path);
        else if (key == "decay") k.sampler.decay = parse_real_literal(v, path);
        else if (key == "time") k.time = parse_real_literal(v, path);
        else if (key == "h1_tolerance") k.h1_tolerance = parse_real_literal(v, path);
      } else if (section == "traits") {
        c.trait_overrides[key] = parse_real_literal(v, path);
      } else if (section == "dependence") {
        if (key == "perturbation") c.dependence.perturbation = parse_real_literal(v, path);
        else if (key == "forcing1") c.dependence.forcing1 = v;
        else if (key == "forcing2") c.dependence.forcing2 = v;
      } else if (section == "convergence") {
        for (const auto& item : split_list(v)) c.convergence_n.push_back(parse_unsigned(item, path));
      }
    }
  }

  apply_basis_defaults(c);
  c.solver.seed = c.seed;
  c.checks.sampler.seed = c.seed;
  for (const auto& key : {"forcing1", "forcing2"}) {
    const std::string& v = key == std::string("forcing1") ? c.dependence.forcing1 : c.dependence.forcing2;
    if (!v.empty()) {
      try {
        ForcingSpec::parse(v);
      } catch (const ConfigurationError& e) {
        throw ConfigurationError(fmt::format("dependence.{}: {}", key, e.what()));
      }
    }
  }

  // validation by construction
  const EvolutionProblem pb = make_problem(c);
  c.solver.validate(pb.basis);
  const bool wants_convergence = std::find(c.tasks.begin(), c.tasks.end(), "convergence") != c.tasks.end();
  if (wants_convergence) {
    if (c.convergence_n.empty()) {
      const std::size_t full = pb.basis.size();
      c.convergence_n = {std::max<std::size_t>(1, full / 4), std::max<std::size_t>(2, full / 2), full};
    }
    for (std::size_t i = 0; i < c.convergence_n.size(); ++i) {
      if (c.convergence_n[i] < 1 || c.convergence_n[i] > pb.basis.size())
        throw ConfigurationError(fmt::format("convergence.n_list: {} outside 1..{}", c.convergence_n[i],
                                             pb.basis.size()));
      if (i > 0 && c.convergence_n[i] <= c.convergence_n[i - 1])
        throw ConfigurationError("convergence.n_list: must be strictly increasing");
    }
    if (c.convergence_n.size() < 2) throw ConfigurationError("convergence.n_list: needs at least two entries");
  }
  if (c.checks.samples < 1) throw ConfigurationError("checks.samples: must be >= 1");
  for (double r : c.checks.sampler.radii)
    if (!(r > 0.0)) throw ConfigurationError("checks.radii: radii must be > 0");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError(fmt::format("cannot read config {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

EvolutionProblem make_problem(const RunConfig& config) {
  const Basis basis = build_basis(config);
  EvolutionProblem pb;
  try {
    pb = build_equation(config, basis);
  } catch (const ConfigurationError& e) {
    const std::string what = e.what();
    if (what.rfind("params.", 0) == 0) throw;
    throw ConfigurationError(fmt::format("params ({}): {}", config.equation, what));
  }
  pb.initial = build_initial(config, pb.basis);
  apply_overrides(config, pb.traits);
  pb.validate();
  return pb;
}

}  // namespace monoevo
