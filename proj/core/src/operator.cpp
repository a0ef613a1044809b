#include "monoevo/operator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "monoevo/error.hpp"

namespace monoevo {

void OperatorTraits::validate() const {
  if (!(alpha > 1.0)) throw ConfigurationError(fmt::format("traits: alpha must be > 1, got {}", alpha));
  if (!(beta >= 0.0)) throw ConfigurationError(fmt::format("traits: beta must be >= 0, got {}", beta));
  if (!(delta > 0.0)) throw ConfigurationError(fmt::format("traits: delta must be > 0, got {}", delta));
  for (double c : {c_monotone, c_coercive, c_growth})
    if (!std::isfinite(c)) throw ConfigurationError("traits: constants must be finite");
  if (margin.coefficient < 0.0) throw ConfigurationError("traits: margin must be >= 0");
  for (const auto* poly : {&rho, &eta})
    for (const auto& term : poly->terms())
      if (term.coef < 0.0 || !std::isfinite(term.coef))
        throw ConfigurationError("traits: rho and eta need finite non-negative coefficients");
  if (uniqueness && (!std::isfinite(uniqueness->c_const) || uniqueness->gamma < 0.0))
    throw ConfigurationError("traits: uniqueness bound needs finite C and gamma >= 0");
}

double OperatorTraits::c_const() const { return std::max({c_monotone, c_coercive, c_growth}); }

std::string OperatorTraits::describe() const {
  std::string s = fmt::format(
      "alpha={:.6g} beta={:.6g} delta={:.6g} C_mono={:.6g} C_coer={:.6g} C_growth={:.6g} f={} "
      "rho={} eta={} margin={:.6g}*|.|_V^{:.4g}",
      alpha, beta, delta, c_monotone, c_coercive, c_growth, f_profile.describe(), rho.describe(),
      eta.describe(), margin.coefficient, margin.exponent);
  if (uniqueness)
    s += fmt::format(" gamma={:.6g} C_uniq={:.6g}", uniqueness->gamma, uniqueness->c_const);
  return s;
}

void EvolutionProblem::validate() const {
  if (!basis.valid()) throw ConfigurationError("problem has no basis");
  if (!op) throw ConfigurationError("problem has no operator");
  if (linear_diagonal.size() != basis.size())
    throw ConfigurationError("linear diagonal does not match the basis size");
  traits.validate();
  if (initial.basis().valid() && !initial.basis().same_as(basis))
    throw BasisMismatch("initial datum lives on a different basis");
}

Field EvolutionProblem::forcing_at(double t) const {
  if (!forcing) return Field::zero(basis, SpaceTag::Vstar);
  return Field(basis, forcing(t), SpaceTag::Vstar);
}

double EvolutionProblem::dual_norm(const Field& w) const {
  if (dual_norm_bound) return dual_norm_bound(w);
  return norm(w, NormKind::Vstar);
}

Field apply(const EvolutionProblem& problem, double t, const Field& u) {
  if (!u.basis().same_as(problem.basis))
    throw BasisMismatch("apply: field is not on the problem basis");
  std::vector<double> out(problem.basis.size(), 0.0);
  problem.op(t, u.coeffs(), out);
  for (double x : out) {
    if (!std::isfinite(x))
      throw NumericalFailure(
          fmt::format("non-finite operator output at t={:.6g} (|u|_H={:.6g})", t, norm(u, NormKind::H)),
          t, norm(u, NormKind::H), std::isfinite(norm(u, NormKind::H)) ? norm(u, NormKind::V) : 0.0);
  }
  return Field(problem.basis, std::move(out), SpaceTag::Vstar);
}

Field nonlinear_part(const EvolutionProblem& problem, double t, const Field& u) {
  Field a = apply(problem, t, u);
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= problem.linear_diagonal[i] * u[i];
  return Field(problem.basis, std::move(c), SpaceTag::Vstar);
}

}  // namespace monoevo
