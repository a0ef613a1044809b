#pragma once

#include <span>
#include <vector>

#include "monoevo/function_space.hpp"

namespace monoevo {

inline constexpr double kSlackTolerance = 1e-9;

struct SlackReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
  double tolerance = kSlackTolerance;
};

SlackReport make_slack(double lhs, double rhs, double tolerance = kSlackTolerance);

/// t -> e^{ct} (g0 + int_0^t e^{-cs} forcing(s) ds), trapezoid on t_grid.
std::vector<double> gronwall_bound(double g0, double c, std::span<const double> forcing,
                                   std::span<const double> t_grid);

/// ||u||_4^4 <= 2 ||u||_2^2 ||grad u||_2^2.
SlackReport ladyzhenskaya_2d(const Field& u);
/// ||u||_4^4 <= 4 ||u||_2 ||grad u||_2^3.
SlackReport ladyzhenskaya_3d(const Field& u);

/// Lp interpolation: ||u||_{p_mid} <= ||u||_{p_low}^{1-theta} ||u||_{p_high}^theta
/// with 1/p_mid = (1-theta)/p_low + theta/p_high.
SlackReport interpolation_bound(const Field& u, double p_low, double p_mid, double p_high,
                                double theta);

/// C_eps in xy <= eps x^a + C_eps y^b.
double young_constant(double a, double b, double eps);
SlackReport young_split(double x, double y, double a, double b, double eps);

}  // namespace monoevo
