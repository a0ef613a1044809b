#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monoevo/function_space.hpp"
#include "monoevo/scalar_functions.hpp"

namespace monoevo {

/// Extra dissipation -m ||v1 - v2||_V^e allowed on the right of local monotonicity.
struct Margin {
  double coefficient = 0.0;
  double exponent = 2.0;
};

/// rho(v) + eta(v) <= c_const (1 + ||v||_V^alpha)(1 + ||v||_H^gamma).
struct UniquenessBound {
  double gamma = 0.0;
  double c_const = 0.0;
};

/// Structural constants an operator claims. Each condition carries its own C;
/// any common C is the max of the three.
struct OperatorTraits {
  double alpha = 2.0;
  double beta = 0.0;
  double delta = 1.0;
  double c_monotone = 0.0;  // local monotonicity
  double c_coercive = 0.0;  // coercivity
  double c_growth = 1.0;    // growth
  TimeProfile f_profile;
  NormPolynomial rho;
  NormPolynomial eta;
  Margin margin;
  std::optional<UniquenessBound> uniqueness;

  void validate() const;
  double c_const() const;
  std::string describe() const;
};

using CoefficientMap =
    std::function<void(double t, std::span<const double> u, std::span<double> out)>;
using DiagonalMap = std::function<void(std::span<const double> u, std::span<double> diag)>;

/// u' = A(t,u) + b(t) projected onto a basis.
struct EvolutionProblem {
  std::string name;
  Basis basis;
  OperatorTraits traits;
  /// Galerkin coefficients <A(t,u), e_i>.
  CoefficientMap op;
  /// Exact linear diagonal part of A (zeros if none).
  std::vector<double> linear_diagonal;
  /// Optional state-dependent non-positive diagonal used only to stabilize stepping.
  DiagonalMap stabilizer;
  /// b(t) coefficients; empty function means b = 0.
  std::function<std::vector<double>(double t)> forcing;
  Field initial;
  /// Upper bound for ||w||_{V*} on this basis; defaults to the closed-form norm.
  std::function<double(const Field&)> dual_norm_bound;

  void validate() const;
  Field forcing_at(double t) const;
  double dual_norm(const Field& w) const;
};

/// A(t,u) with a finiteness check.
Field apply(const EvolutionProblem& problem, double t, const Field& u);
/// A(t,u) minus its linear diagonal part.
Field nonlinear_part(const EvolutionProblem& problem, double t, const Field& u);

}  // namespace monoevo
