#include "monoevo/inequalities.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "monoevo/error.hpp"

namespace monoevo {

SlackReport make_slack(double lhs, double rhs, double tolerance) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs))
    throw NumericalFailure(fmt::format("non-finite inequality sides: lhs={} rhs={}", lhs, rhs));
  SlackReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.holds = r.slack >= -tolerance;
  return r;
}

std::vector<double> gronwall_bound(double g0, double c, std::span<const double> forcing,
                                   std::span<const double> t_grid) {
  if (g0 < 0.0) throw ConfigurationError(fmt::format("gronwall_bound: g0 must be >= 0, got {}", g0));
  if (forcing.size() != t_grid.size())
    throw ConfigurationError("gronwall_bound: forcing and time grid differ in length");
  if (t_grid.empty()) return {};
  if (t_grid.front() != 0.0) throw ConfigurationError("gronwall_bound: time grid must start at 0");
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    if (forcing[i] < 0.0)
      throw ConfigurationError(fmt::format("gronwall_bound: negative forcing {} at index {}", forcing[i], i));
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw ConfigurationError("gronwall_bound: time grid must be strictly increasing");
  }
  std::vector<double> out(t_grid.size());
  double integral = 0.0;
  double prev = forcing[0];
  out[0] = g0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double cur = std::exp(-c * t_grid[i]) * forcing[i];
    integral += 0.5 * (t_grid[i] - t_grid[i - 1]) * (prev + cur);
    prev = cur;
    out[i] = std::exp(c * t_grid[i]) * (g0 + integral);
  }
  return out;
}

SlackReport ladyzhenskaya_2d(const Field& u) {
  if (u.basis().domain().dims != 2)
    throw ConfigurationError(fmt::format("ladyzhenskaya_2d needs a 2D basis, got d={}",
                                         u.basis().domain().dims));
  const double l4 = lp_norm(u, 4.0);
  const double h = norm(u, NormKind::H);
  const double v = norm(u, NormKind::V);
  const double lhs = std::pow(l4, 4);
  const double rhs = 2.0 * h * h * v * v;
  return make_slack(lhs, rhs);
}

SlackReport ladyzhenskaya_3d(const Field& u) {
  if (u.basis().domain().dims != 3)
    throw ConfigurationError(fmt::format("ladyzhenskaya_3d needs a 3D basis, got d={}",
                                         u.basis().domain().dims));
  const double l4 = lp_norm(u, 4.0);
  const double h = norm(u, NormKind::H);
  const double v = norm(u, NormKind::V);
  const double lhs = std::pow(l4, 4);
  const double rhs = 4.0 * h * v * v * v;
  return make_slack(lhs, rhs);
}

SlackReport interpolation_bound(const Field& u, double p_low, double p_mid, double p_high,
                                double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw ConfigurationError(fmt::format("interpolation_bound: theta {} outside [0,1]", theta));
  const double gap = 1.0 / p_mid - ((1.0 - theta) / p_low + theta / p_high);
  if (std::abs(gap) > 1e-12)
    throw ConfigurationError(
        fmt::format("interpolation_bound: exponents violate 1/p_mid = (1-theta)/p_low + "
                    "theta/p_high (gap {:.3e})", gap));
  const double lhs = lp_norm(u, p_mid);
  const double rhs = std::pow(lp_norm(u, p_low), 1.0 - theta) * std::pow(lp_norm(u, p_high), theta);
  return make_slack(lhs, rhs);
}

double young_constant(double a, double b, double eps) {
  if (!(a > 1.0) || !(b > 1.0) || !(eps > 0.0))
    throw ConfigurationError(fmt::format("young: need a,b > 1 and eps > 0 (a={}, b={}, eps={})", a, b, eps));
  if (std::abs(1.0 / a + 1.0 / b - 1.0) > 1e-12)
    throw ConfigurationError(fmt::format("young: exponents {} and {} are not conjugate", a, b));
  return std::pow(a * eps, -b / a) / b;
}

SlackReport young_split(double x, double y, double a, double b, double eps) {
  if (x < 0.0 || y < 0.0) throw ConfigurationError("young_split: x and y must be >= 0");
  const double c = young_constant(a, b, eps);
  const double rhs = eps * std::pow(x, a) + c * std::pow(y, b);
  return make_slack(x * y, rhs);
}

}  // namespace monoevo
