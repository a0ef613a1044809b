#include "monoevo/catalog.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <numbers>

#include "monoevo/error.hpp"
#include "monoevo/inequalities.hpp"

namespace monoevo {

namespace {

constexpr double kSmoothingFloor = 1e-12;

bool finite(double x) { return std::isfinite(x); }

double parse_real(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigurationError(fmt::format("bad forcing spec '{}' (expected none or mode:i:amp)", whole));
  return v;
}

// Sample points for the scalar-condition checks.
std::vector<double> sample_points() {
  std::vector<double> xs;
  for (int i = -40; i <= 40; ++i) xs.push_back(0.25 * i);
  for (double x : {1e-3, 0.5e-1, 20.0, 50.0}) {
    xs.push_back(x);
    xs.push_back(-x);
  }
  return xs;
}

bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

void verify_flux(const ScalarFunction& F, double c, std::string_view name) {
  if (!finite(c))
    throw ConfigurationError(fmt::format(
        "{}: '{}' does not satisfy |F(x)-F(y)| <= C(1+|x|+|y|)|x-y|", name, F.spec()));
  const auto xs = sample_points();
  for (double x : xs)
    for (double y : xs)
      if (!leq(std::abs(F(x) - F(y)), c * (1 + std::abs(x) + std::abs(y)) * std::abs(x - y)))
        throw ConfigurationError(fmt::format(
            "{}: sampled growth bound for '{}' fails at x={}, y={}", name, F.spec(), x, y));
}

// g(x)x <= c_sign(|x|^q + 1), |g(x)| <= c_gr(|x|^r + 1), and
// (g(x)-g(y))(x-y) <= c_mono(1+|x|^t+|y|^t)|x-y|^2.
struct ReactionConstants {
  double c_sign = 0.0;
  double c_gr = 0.0;
  double c_mono = 0.0;
};

ReactionConstants verify_reaction(const ScalarFunction& g, double q, double r, double t,
                                  std::string_view name) {
  ReactionConstants k{g.sign_constant(q), g.growth_constant(r), g.monotone_constant()};
  if (!finite(k.c_sign))
    throw ConfigurationError(
        fmt::format("{}: g='{}' violates g(x)x <= C(|x|^{:.4g}+1)", name, g.spec(), q));
  if (!finite(k.c_gr))
    throw ConfigurationError(
        fmt::format("{}: g='{}' violates |g(x)| <= C(|x|^{:.4g}+1)", name, g.spec(), r));
  if (!finite(k.c_mono))
    throw ConfigurationError(fmt::format(
        "{}: g='{}' violates (g(x)-g(y))(x-y) <= C(1+|x|^t+|y|^t)|x-y|^2", name, g.spec()));
  const auto xs = sample_points();
  for (double x : xs) {
    if (!leq(g(x) * x, k.c_sign * (std::pow(std::abs(x), q) + 1)) ||
        !leq(std::abs(g(x)), k.c_gr * (std::pow(std::abs(x), r) + 1)))
      throw ConfigurationError(fmt::format("{}: sampled bound on g='{}' fails at x={}", name, g.spec(), x));
    for (double y : xs) {
      const double lhs = (g(x) - g(y)) * (x - y);
      const double rhs =
          k.c_mono * (1 + std::pow(std::abs(x), t) + std::pow(std::abs(y), t)) * (x - y) * (x - y);
      if (!leq(lhs, rhs))
        throw ConfigurationError(fmt::format(
            "{}: sampled one-sided bound on g='{}' fails at x={}, y={}", name, g.spec(), x, y));
    }
  }
  return k;
}

std::function<std::vector<double>(double)> constant_forcing(const ForcingSpec& spec, const Basis& basis) {
  if (spec.is_zero()) return {};
  auto coeffs = spec.coefficients(basis);
  return [coeffs](double) { return coeffs; };
}

std::vector<double> laplace_diagonal(const Basis& basis, double scale) {
  const auto w = basis.v_weight();
  std::vector<double> d(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d[i] = -scale * w[i] * w[i];
  return d;
}

void require_fourier_div_free(const Basis& basis, int dims, std::string_view name) {
  if (!basis.is_fourier() || basis.domain().dims != dims || !basis.divergence_free())
    throw ConfigurationError(fmt::format(
        "{} needs a {}D periodic divergence-free vector basis, got {}", name, dims,
        basis.domain().describe()));
}

// -(a . grad) v on the grid, component-major.
std::vector<double> convective_values(const Basis& basis, std::span<const double> a_coeffs,
                                      std::span<const double> v_coeffs) {
  const auto a = basis.synthesize(a_coeffs);
  const auto grad = basis.synthesize_gradient(v_coeffs);
  const std::size_t P = basis.grid_points();
  const int d = basis.domain().dims;
  const int comps = basis.components();
  std::vector<double> out(static_cast<std::size_t>(comps) * P, 0.0);
  for (int c = 0; c < comps; ++c)
    for (int ax = 0; ax < d; ++ax) {
      const double* g = grad.data() + (static_cast<std::size_t>(c) * d + ax) * P;
      const double* aa = a.data() + static_cast<std::size_t>(ax) * P;
      double* o = out.data() + static_cast<std::size_t>(c) * P;
      for (std::size_t j = 0; j < P; ++j) o[j] -= aa[j] * g[j];
    }
  return out;
}

std::vector<double> smoothing_factors(const Basis& basis, double alpha_smooth) {
  const auto w = basis.v_weight();
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) f[i] = 1.0 / (1.0 + alpha_smooth * alpha_smooth * w[i] * w[i]);
  return f;
}

}  // namespace

// ---------------------------------------------------------------- forcing

ForcingSpec ForcingSpec::parse(std::string_view text) {
  if (text.empty() || text == "none") return {};
  constexpr std::string_view prefix = "mode:";
  if (text.substr(0, prefix.size()) != prefix)
    throw ConfigurationError(fmt::format("bad forcing spec '{}' (expected none or mode:i:amp)", text));
  const auto rest = text.substr(prefix.size());
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw ConfigurationError(fmt::format("bad forcing spec '{}' (expected none or mode:i:amp)", text));
  const double idx = parse_real(rest.substr(0, colon), text);
  if (idx < 1 || idx != std::floor(idx))
    throw ConfigurationError(fmt::format("forcing mode index must be a positive integer in '{}'", text));
  ForcingSpec s;
  s.mode = static_cast<std::size_t>(idx);
  s.amplitude = parse_real(rest.substr(colon + 1), text);
  return s;
}

std::string ForcingSpec::describe() const {
  if (is_zero()) return "none";
  return fmt::format("mode:{}:{}", mode, amplitude);
}

std::vector<double> ForcingSpec::coefficients(const Basis& basis) const {
  std::vector<double> c(basis.size(), 0.0);
  if (is_zero()) return c;
  if (mode > basis.size())
    throw ConfigurationError(
        fmt::format("forcing mode {} exceeds basis size {}", mode, basis.size()));
  c[mode - 1] = amplitude;
  return c;
}

// ---------------------------------------------------------------- Burgers / reaction-diffusion

EvolutionProblem burgers_rd_1d(const BurgersRDParams& params, const Basis& basis) {
  if (!basis.valid() || basis.is_fourier() || basis.domain().dims != 1 || !basis.hilbertian())
    throw ConfigurationError("burgers/reaction-diffusion needs a 1D Dirichlet sine basis");
  if (!(params.t_exp >= 1.0))
    throw ConfigurationError(fmt::format("burgers: t_exp must be >= 1, got {}", params.t_exp));

  const double cf = params.C_lip > 0.0 ? params.C_lip : params.F.flux_growth();
  verify_flux(params.F, cf, "burgers");
  const auto g = verify_reaction(params.g, 2.0, 3.0, params.t_exp, "burgers");

  const double L = basis.domain().measure();
  const double lambda = basis.lambda_min();
  const double t = params.t_exp;

  // |F(x) - F(0)| <= a1 |x| + a2 x^2
  double a1 = 0.0, a2 = 0.0;
  switch (params.F.kind()) {
    case ScalarKind::linear:
    case ScalarKind::tanh: a1 = std::abs(params.F.param()); break;
    case ScalarKind::quadratic: a2 = std::abs(params.F.param()); break;
    case ScalarKind::signed_square: a1 = a2 = 1.0; break;
    case ScalarKind::none:
    case ScalarKind::constant: break;
    default: a1 = a2 = cf; break;
  }

  const double y1 = young_constant(8.0 / 5.0, 8.0 / 3.0, 0.25);
  const double y2 = young_constant(4.0, 4.0 / 3.0, 0.25);
  const double flux_part = y1 * std::pow(cf, 8.0 / 3.0);
  const double react_part = y2 * std::pow(g.c_mono, 4.0 / 3.0);

  OperatorTraits tr;
  tr.alpha = 2.0;
  tr.beta = 2.0;
  tr.delta = 2.0;
  tr.margin = {0.5, 2.0};
  tr.c_monotone = g.c_mono + flux_part * (1.0 + 27.0 * L) + react_part;
  tr.rho.add_lp(27.0 * flux_part, 4.0, 4.0).add_lp(2.0 * react_part, 2.0 * t, 2.0 * t);
  tr.eta = tr.rho;
  tr.c_coercive = 2.0 * g.c_sign;
  tr.c_growth = 1.0 + a1 / std::sqrt(lambda) + a2 * std::pow(lambda, -0.25) + g.c_gr / std::sqrt(lambda);
  tr.f_profile =
      TimeProfile::constant(std::max(2.0 * g.c_sign * L, 4.0 * g.c_gr * g.c_gr * L / lambda));
  if (t <= 2.0)
    tr.uniqueness = UniquenessBound{
        2.0, 54.0 * flux_part / std::sqrt(lambda) + 4.0 * react_part * (1.0 + 1.0 / std::sqrt(lambda))};

  EvolutionProblem pb;
  const bool heat = params.F.is_zero() && params.g.is_zero();
  pb.name = heat ? "heat" : (params.g.is_zero() ? "burgers" : "reaction_diffusion");
  pb.basis = basis;
  pb.traits = tr;
  pb.linear_diagonal = laplace_diagonal(basis, 1.0);
  pb.forcing = constant_forcing(params.h, basis);
  const auto diag = pb.linear_diagonal;
  const ScalarFunction F = params.F, gg = params.g;
  pb.op = [basis, diag, F, gg](double, std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag[i] * u[i];
    if (F.is_zero() && gg.is_zero()) return;
    const auto vals = basis.synthesize(u);
    if (!F.is_zero()) {
      std::vector<double> flux(vals.size());
      for (std::size_t j = 0; j < vals.size(); ++j) flux[j] = F(vals[j]);
      const auto c = basis.analyze_divergence(flux);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
    }
    if (!gg.is_zero()) {
      std::vector<double> react(vals.size());
      for (std::size_t j = 0; j < vals.size(); ++j) react[j] = gg(vals[j]);
      const auto c = basis.analyze(react);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
    }
  };
  pb.initial = Field::zero(basis);
  pb.validate();
  return pb;
}

// ---------------------------------------------------------------- advection-diffusion

EvolutionProblem advection_diffusion(const AdvectionDiffusionParams& params, const Basis& basis) {
  const int d = params.d;
  if (d != 2 && d != 3)
    throw ConfigurationError(fmt::format("advection_diffusion: d must be 2 or 3, got {}", d));
  if (!basis.valid() || basis.domain().dims != d || basis.components() != 1 || !basis.hilbertian())
    throw ConfigurationError(fmt::format("advection_diffusion: needs a scalar {}D basis", d));
  if (d == 2 && basis.is_fourier())
    throw ConfigurationError("advection_diffusion: d=2 needs a Dirichlet box (domain = box)");
  if (d == 3 && !basis.is_fourier())
    throw ConfigurationError("advection_diffusion: d=3 needs a periodic torus (domain = torus)");
  const bool r_ok = std::abs(params.r - 7.0 / 3.0) < 1e-12;
  const bool t_ok = d == 2 ? std::abs(params.t_exp - 2.0) < 1e-12
                           : params.t_exp >= 1.0 && params.t_exp <= 3.0;
  if (!r_ok || !t_ok)
    throw ConfigurationError(fmt::format(
        "advection_diffusion: (d, r, t_exp) = ({}, {}, {}) unsupported; admissible: "
        "(2, 7/3, 2) and (3, 7/3, t_exp in [1, 3])",
        d, params.r, params.t_exp));
  if (static_cast<int>(params.f.size()) != d)
    throw ConfigurationError(
        fmt::format("advection_diffusion: need {} advection functions f_i, got {}", d, params.f.size()));

  double mf = 0.0, lf = 0.0;
  bool constant_f = true;
  for (const auto& fi : params.f) {
    const double sup = fi.sup_bound(), lip = fi.lipschitz();
    if (!finite(sup) || !finite(lip))
      throw ConfigurationError(fmt::format(
          "advection_diffusion: f_i='{}' must be bounded and Lipschitz", fi.spec()));
    for (double x : sample_points())
      if (std::abs(fi(x)) > sup * (1 + 1e-12))
        throw ConfigurationError(fmt::format("advection_diffusion: sup bound of '{}' fails", fi.spec()));
    mf = std::max(mf, sup);
    lf = std::max(lf, lip);
    constant_f = constant_f && lip == 0.0;
  }
  const auto g = verify_reaction(params.g, 2.0, params.r, params.t_exp, "advection_diffusion");
  if (!(params.l6_constant > 0.0)) throw ConfigurationError("advection_diffusion: l6_constant must be > 0");

  const double area = basis.domain().measure();
  const double lambda = basis.lambda_min();
  const double t = params.t_exp;
  const double c = g.c_mono;
  const double S = params.l6_constant;

  OperatorTraits tr;
  tr.alpha = 2.0;
  tr.beta = 4.0 / 3.0;
  tr.delta = 1.0;
  tr.margin = {0.5, 2.0};
  tr.c_monotone = 2.0 * d * mf * mf + c;
  double k_g = 0.0;
  if (d == 2) {
    tr.eta.add_v(4.0 * d * lf * lf, 2.0);
    tr.rho.add_lp(8.0 * c * c, 2.0 * t, 2.0 * t);
    tr.eta.add_lp(8.0 * c * c, 2.0 * t, 2.0 * t);
    k_g = std::pow(2.0, 2.0 / 3.0) * std::pow(lambda, -1.0 / 3.0);
    tr.uniqueness = UniquenessBound{2.0, 4.0 * d * lf * lf + 32.0 * c * c};
  } else {
    const double y_adv = young_constant(4.0 / 3.0, 4.0, 1.0 / 8.0);
    const double y_re = young_constant(4.0 / 3.0, 4.0, 1.0 / 4.0);
    tr.eta.add_v(y_adv * std::pow(2.0 * std::sqrt(double(d)) * lf, 4.0), 4.0);
    tr.rho.add_lp(128.0 * y_re * std::pow(c, 4.0), 2.0 * t, 4.0 * t);
    tr.eta.add_lp(128.0 * y_re * std::pow(c, 4.0), 2.0 * t, 4.0 * t);
    k_g = S * S;
    if (constant_f && std::abs(t - 4.0 / 3.0) < 1e-12)
      tr.uniqueness = UniquenessBound{10.0 / 3.0, 256.0 * y_re * std::pow(c, 4.0) * S * S};
  }
  tr.c_coercive = d * mf * mf + 2.0 * g.c_sign;
  tr.c_growth = std::max(1.0 + std::sqrt(d / lambda) * mf, g.c_gr * k_g);
  tr.f_profile = TimeProfile::constant(
      std::max(2.0 * g.c_sign * area, g.c_gr * g.c_gr * area / lambda));

  EvolutionProblem pb;
  pb.name = d == 2 ? "advection_diffusion_2d" : "advection_diffusion_3d";
  pb.basis = basis;
  pb.traits = tr;
  pb.linear_diagonal = laplace_diagonal(basis, 1.0);
  pb.forcing = constant_forcing(params.h, basis);
  const auto diag = pb.linear_diagonal;
  const auto fs = params.f;
  const ScalarFunction gg = params.g;
  pb.op = [basis, diag, fs, gg, d](double, std::span<const double> u, std::span<double> out) {
    const auto vals = basis.synthesize(u);
    const auto grad = basis.synthesize_gradient(u);
    const std::size_t P = vals.size();
    std::vector<double> q(P);
    for (std::size_t j = 0; j < P; ++j) {
      double s = gg(vals[j]);
      for (int ax = 0; ax < d; ++ax) s += fs[ax](vals[j]) * grad[ax * P + j];
      q[j] = s;
    }
    const auto c = basis.analyze(q);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag[i] * u[i] + c[i];
  };
  pb.initial = Field::zero(basis);
  pb.validate();
  return pb;
}

// ---------------------------------------------------------------- p-Laplace

double sup_embedding_constant(const Domain& domain, double p) {
  if (domain.kind != DomainKind::interval_dirichlet)
    throw ConfigurationError("sup embedding constant needs a Dirichlet interval or box");
  if (domain.dims == 1) return 0.5 * std::pow(domain.lengths[0], 1.0 - 1.0 / p);
  if (domain.dims == 2) {
    if (!(p > 2.0)) throw ConfigurationError("sup embedding in 2D needs p > 2");
    const double a = 0.5 - 1.0 / p;
    return std::pow(std::numbers::pi, -0.5) * std::pow(0.5 / a, 1.0 - 1.0 / p) *
           std::pow(domain.measure(), a) * std::pow(2.0, a);
  }
  throw ConfigurationError("sup embedding constant only for d = 1, 2");
}

EvolutionProblem p_laplace(const PLaplaceParams& params, const Basis& basis_in) {
  const double p = params.p;
  if (!(p > 2.0)) throw ConfigurationError(fmt::format("p_laplace: p > 2 required, got {}", p));
  if (!basis_in.valid() || basis_in.is_fourier() || basis_in.domain().dims > 2)
    throw ConfigurationError("p_laplace needs a 1D or 2D Dirichlet sine basis");
  const int d = basis_in.domain().dims;
  if (!(d < p)) throw ConfigurationError("p_laplace: only d < p is supported");
  const double r = params.r > 0.0 ? params.r : p + 1.0;
  if (std::abs(r - (p + 1.0)) > 1e-12 || std::abs(params.s - 2.0) > 1e-12 || params.t_exp < 1.0)
    throw ConfigurationError(fmt::format(
        "p_laplace: (r, s, t_exp) = ({}, {}, {}) unsupported; admissible for d < p: r = p+1, s = 2, "
        "t_exp >= 1",
        r, params.s, params.t_exp));
  const auto g = verify_reaction(params.g, p / 2.0 + 1.0, r, params.t_exp, "p_laplace");

  const Basis basis = basis_in.with_sobolev_exponent(p);
  const double S = sup_embedding_constant(basis.domain(), p);
  const double area = basis.domain().measure();
  const double t = params.t_exp;

  OperatorTraits tr;
  tr.alpha = p;
  tr.beta = 2.0;
  tr.margin = {std::pow(2.0, 2.0 - p), p};
  tr.c_monotone = g.c_mono;
  tr.rho.add_v(g.c_mono * std::pow(S, t), t);
  tr.eta = tr.rho;
  if (params.g.is_zero()) {
    tr.delta = 2.0;
    tr.c_coercive = 0.0;
  } else {
    tr.delta = 1.0;
    tr.c_coercive = std::pow(S, p) * g.c_sign * g.c_sign * area;
  }
  tr.c_growth = std::max(1.0, g.c_gr * std::pow(S, p));
  tr.f_profile = TimeProfile::constant(
      std::max(2.0 * g.c_sign * area, std::pow(g.c_gr * S * area, p / (p - 1.0))));
  if (t <= p) tr.uniqueness = UniquenessBound{0.0, g.c_mono * std::pow(S, t)};

  EvolutionProblem pb;
  pb.name = "p_laplace";
  pb.basis = basis;
  pb.traits = tr;
  pb.linear_diagonal.assign(basis.size(), 0.0);
  pb.forcing = constant_forcing(params.h, basis);
  pb.dual_norm_bound = [S, area](const Field& w) { return S * std::sqrt(area) * norm(w, NormKind::H); };
  const ScalarFunction gg = params.g;
  pb.op = [basis, gg, p](double, std::span<const double> u, std::span<double> out) {
    const auto grad = basis.synthesize_gradient(u);
    std::vector<double> flux(grad.size());
    const double eps2 = kSmoothingFloor * kSmoothingFloor;
    for (std::size_t j = 0; j < grad.size(); ++j)
      flux[j] = std::pow(grad[j] * grad[j] + eps2, 0.5 * (p - 2.0)) * grad[j];
    auto c = basis.analyze_divergence(flux);
    if (!gg.is_zero()) {
      const auto vals = basis.synthesize(u);
      std::vector<double> react(vals.size());
      for (std::size_t j = 0; j < vals.size(); ++j) react[j] = gg(vals[j]);
      const auto cg = basis.analyze(react);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += cg[i];
    }
    std::copy(c.begin(), c.end(), out.begin());
  };
  const auto w = basis.v_weight();
  std::vector<double> lam(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) lam[i] = w[i] * w[i];
  pb.stabilizer = [basis, lam, p](std::span<const double> u, std::span<double> diag) {
    const auto grad = basis.synthesize_gradient(u);
    double mean = 0.0;
    for (double gj : grad) mean += std::pow(std::abs(gj), p - 2.0);
    mean /= static_cast<double>(grad.size());
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = -(p - 1.0) * mean * lam[i];
  };
  pb.initial = Field::zero(basis);
  pb.validate();
  return pb;
}

// ---------------------------------------------------------------- Navier-Stokes / Leray-alpha

Field helmholtz_smooth(const Field& u, double alpha_smooth) {
  if (!u.basis().is_fourier()) throw ConfigurationError("helmholtz_smooth needs a Fourier basis");
  if (!(alpha_smooth >= 0.0)) throw ConfigurationError("helmholtz_smooth: alpha_smooth must be >= 0");
  const auto f = smoothing_factors(u.basis(), alpha_smooth);
  std::vector<double> c(u.coeffs().begin(), u.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= f[i];
  return Field(u.basis(), std::move(c), u.space());
}

Field helmholtz_apply(const Field& u, double alpha_smooth) {
  if (!u.basis().is_fourier()) throw ConfigurationError("helmholtz_apply needs a Fourier basis");
  const auto w = u.basis().v_weight();
  std::vector<double> c(u.coeffs().begin(), u.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= 1.0 + alpha_smooth * alpha_smooth * w[i] * w[i];
  return Field(u.basis(), std::move(c), u.space());
}

Field advective_term(const Field& u, const Field& v, double alpha_smooth) {
  if (!u.basis().same_as(v.basis())) throw BasisMismatch("advective_term: fields on different bases");
  const Basis& basis = u.basis();
  if (!basis.is_fourier() || !basis.divergence_free())
    throw ConfigurationError("advective_term needs a divergence-free Fourier basis");
  const Field a = alpha_smooth > 0.0 ? helmholtz_smooth(u, alpha_smooth) : u;
  const auto vals = convective_values(basis, a.coeffs(), v.coeffs());
  return Field(basis, basis.analyze(vals), SpaceTag::Vstar);
}

Field taylor_green(const Basis& basis, double amplitude) {
  require_fourier_div_free(basis, 2, "taylor_green");
  const auto nodes = basis.grid_nodes();
  const double kx = 2.0 * std::numbers::pi / basis.domain().lengths[0];
  const double ky = 2.0 * std::numbers::pi / basis.domain().lengths[1];
  const std::size_t P = nodes.size();
  GridValues g;
  g.components = 2;
  g.points = P;
  g.values.resize(2 * P);
  for (std::size_t j = 0; j < P; ++j) {
    const double x = kx * nodes[j][0], y = ky * nodes[j][1];
    g.values[j] = amplitude * std::sin(x) * std::cos(y);
    g.values[P + j] = -amplitude * std::cos(x) * std::sin(y);
  }
  return from_grid(g, basis, SpaceTag::V);
}

EvolutionProblem navier_stokes_2d(const NSEParams& params, const Basis& basis) {
  if (!(params.nu > 0.0)) throw ConfigurationError(fmt::format("nse_2d: nu must be > 0, got {}", params.nu));
  require_fourier_div_free(basis, 2, "nse_2d");
  const double nu = params.nu;

  OperatorTraits tr;
  tr.alpha = 2.0;
  tr.beta = 1.0;
  tr.delta = nu;
  tr.margin = {nu / 2.0, 2.0};
  tr.c_monotone = 0.0;
  tr.eta.add_lp(32.0 / (nu * nu * nu), 4.0, 4.0);
  tr.c_coercive = 0.0;
  tr.c_growth = std::max(nu, 2.0 * std::sqrt(2.0));
  tr.uniqueness = UniquenessBound{2.0, 64.0 / (nu * nu * nu)};

  EvolutionProblem pb;
  pb.name = "nse_2d";
  pb.basis = basis;
  pb.traits = tr;
  pb.linear_diagonal = laplace_diagonal(basis, nu);
  pb.forcing = constant_forcing(params.f, basis);
  const auto diag = pb.linear_diagonal;
  pb.op = [basis, diag](double, std::span<const double> u, std::span<double> out) {
    const auto c = basis.analyze(convective_values(basis, u, u));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag[i] * u[i] + c[i];
  };
  pb.initial = Field::zero(basis);
  pb.validate();
  return pb;
}

double leray_sup_constant(const Basis& basis, double alpha_smooth) {
  const auto f = smoothing_factors(basis, alpha_smooth);
  double s2 = 0.0;
  for (double x : f) s2 += x * x;
  return std::sqrt(2.0 / basis.domain().measure()) * std::sqrt(s2);
}

EvolutionProblem leray_alpha_3d(const LerayAlphaParams& params, const Basis& basis) {
  if (!(params.nu > 0.0))
    throw ConfigurationError(fmt::format("leray_alpha_3d: nu must be > 0, got {}", params.nu));
  if (!(params.alpha_smooth > 0.0))
    throw ConfigurationError(
        fmt::format("leray_alpha_3d: alpha_smooth must be > 0, got {}", params.alpha_smooth));
  require_fourier_div_free(basis, 3, "leray_alpha_3d");
  const double nu = params.nu;
  const double K = leray_sup_constant(basis, params.alpha_smooth);

  OperatorTraits tr;
  tr.alpha = 2.0;
  tr.beta = 1.0;
  tr.delta = nu;
  tr.margin = {nu / 2.0, 2.0};
  tr.c_monotone = K;
  tr.eta.add_v(K, 8.0 / 5.0);
  tr.c_coercive = 0.0;
  tr.c_growth = std::max(nu, K / std::sqrt(basis.lambda_min()));
  tr.uniqueness = UniquenessBound{0.0, K};

  EvolutionProblem pb;
  pb.name = "leray_alpha_3d";
  pb.basis = basis;
  pb.traits = tr;
  pb.linear_diagonal = laplace_diagonal(basis, nu);
  pb.forcing = constant_forcing(params.f, basis);
  const auto diag = pb.linear_diagonal;
  const auto smooth = smoothing_factors(basis, params.alpha_smooth);
  pb.op = [basis, diag, smooth](double, std::span<const double> u, std::span<double> out) {
    std::vector<double> a(u.begin(), u.end());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= smooth[i];
    const auto c = basis.analyze(convective_values(basis, a, u));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag[i] * u[i] + c[i];
  };
  pb.initial = Field::zero(basis);
  pb.validate();
  return pb;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{
      "burgers", "reaction_diffusion", "advection_diffusion_2d", "advection_diffusion_3d",
      "p_laplace", "nse_2d", "leray_alpha_3d"};
  return names;
}

}  // namespace monoevo
