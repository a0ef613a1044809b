#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "monoevo/function_space.hpp"
#include "monoevo/operator.hpp"
#include "monoevo/scalar_functions.hpp"

namespace monoevo {

/// Time-constant forcing: either none or amplitude * e_i (1-based index).
/// Text form: "none" or "mode:i:amp".
struct ForcingSpec {
  std::size_t mode = 0;  // 0 means no forcing
  double amplitude = 0.0;

  static ForcingSpec parse(std::string_view text);
  bool is_zero() const { return mode == 0 || amplitude == 0.0; }
  std::string describe() const;
  std::vector<double> coefficients(const Basis& basis) const;
};

/// u' = u_xx + d/dx F(u) + g(u) + h on a 1D Dirichlet interval.
struct BurgersRDParams {
  ScalarFunction F;
  ScalarFunction g;
  double t_exp = 2.0;  // exponent t in the one-sided bound on g
  ForcingSpec h;
  double C_lip = 0.0;  // constant for F's growth bound; 0 derives it from F
};

/// u' = Lap u + sum_i f_i(u) D_i u + g(u) + h, d = 2 (Dirichlet box) or 3 (torus).
struct AdvectionDiffusionParams {
  int d = 2;
  std::vector<ScalarFunction> f;  // one per axis, bounded and Lipschitz
  ScalarFunction g;
  double r = 7.0 / 3.0;
  double t_exp = 2.0;
  ForcingSpec h;
  /// ||v||_6 <= S ||grad v||_2 on the 3D torus (declared, sample-tested).
  double l6_constant = 1.0;
};

/// u' = sum_i D_i(|D_i u|^{p-2} D_i u) + g(u) + h on a Dirichlet interval or box.
struct PLaplaceParams {
  double p = 4.0;
  ScalarFunction g;
  double r = 0.0;  // 0 means p + 1
  double s = 2.0;
  double t_exp = 2.0;
  ForcingSpec h;
};

struct NSEParams {
  double nu = 0.5;
  ForcingSpec f;
};

struct LerayAlphaParams {
  double nu = 0.5;
  double alpha_smooth = 1.0;
  ForcingSpec f;
};

EvolutionProblem burgers_rd_1d(const BurgersRDParams& params, const Basis& basis);
EvolutionProblem advection_diffusion(const AdvectionDiffusionParams& params, const Basis& basis);
EvolutionProblem p_laplace(const PLaplaceParams& params, const Basis& basis);
EvolutionProblem navier_stokes_2d(const NSEParams& params, const Basis& basis);
EvolutionProblem leray_alpha_3d(const LerayAlphaParams& params, const Basis& basis);

/// (I - a^2 Lap)^{-1} on the retained Fourier span.
Field helmholtz_smooth(const Field& u, double alpha_smooth);
/// (I - a^2 Lap) on the retained Fourier span.
Field helmholtz_apply(const Field& u, double alpha_smooth);

/// -P[(smooth(u) . grad) v], projected onto the divergence-free basis.
Field advective_term(const Field& u, const Field& v, double alpha_smooth = 0.0);

/// (sin x cos y, -cos x sin y) scaled to the torus, on a 2D divergence-free basis.
Field taylor_green(const Basis& basis, double amplitude = 1.0);

/// sup |v| <= S ||v||_V for the p-Laplace V-norm on a Dirichlet interval or box.
double sup_embedding_constant(const Domain& domain, double p);

/// Sup of the smoothed Leray velocity relative to ||u||_H.
double leray_sup_constant(const Basis& basis, double alpha_smooth);

const std::vector<std::string>& catalog_names();

}  // namespace monoevo
