#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "monoevo/function_space.hpp"

namespace monoevo {

enum class ScalarKind {
  none,           // 0
  linear,         // c x
  quadratic,      // c x^2
  allen_cahn,     // x - x^3
  signed_square,  // x - x|x|
  clipped_cubic,  // x - clamp(x, -M, M)^3
  tanh,           // a tanh(x)
  constant,       // c
};

/// Closed-form nonlinearity used for F, g and f_i. Parsed from "kind" or
/// "kind:param", e.g. "quadratic:1", "clipped_cubic:2", "tanh:0.5".
class ScalarFunction {
 public:
  ScalarFunction() = default;
  ScalarFunction(ScalarKind kind, double param);

  static ScalarFunction parse(std::string_view spec);

  double operator()(double x) const;
  double derivative(double x) const;

  ScalarKind kind() const { return kind_; }
  double param() const { return param_; }
  bool is_zero() const { return kind_ == ScalarKind::none; }
  std::string spec() const;

  /// sup |f| (infinity when unbounded).
  double sup_bound() const;
  /// Global Lipschitz constant (infinity when not globally Lipschitz).
  double lipschitz() const;
  /// C in |F(x)-F(y)| <= C (1+|x|+|y|) |x-y| (infinity when not available).
  double flux_growth() const;

  /// g(x) x <= c_sign (|x|^q + 1) with q = sign_power (2 for the semilinear cases).
  double sign_constant(double sign_power = 2.0) const;
  /// (g(x)-g(y))(x-y) <= c_mono (1 + |x|^t + |y|^t)(x-y)^2, for any t >= 1.
  double monotone_constant() const;
  /// |g(x)| <= c_gr (|x|^r + 1); infinity when g grows faster than |x|^r.
  double growth_constant(double r) const;

 private:
  ScalarKind kind_ = ScalarKind::none;
  double param_ = 0.0;
};

/// Time profile f(t) >= 0 stored in closed form so reports serialize.
class TimeProfile {
 public:
  enum class Kind { zero, constant, table };

  TimeProfile() = default;
  static TimeProfile constant(double value);
  static TimeProfile table(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::zero;
  double value_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// sum_j coef_j * ||v||_{kind_j}^{power_j}, with kind in {Lq, V, H}.
class NormPolynomial {
 public:
  enum class Kind { lp, v, h };
  struct Term {
    double coef = 0.0;
    double power = 1.0;
    Kind kind = Kind::h;
    double q = 2.0;  // Lebesgue exponent when kind == lp
  };

  NormPolynomial() = default;
  NormPolynomial& add_lp(double coef, double q, double power);
  NormPolynomial& add_v(double coef, double power);
  NormPolynomial& add_h(double coef, double power);

  double operator()(const Field& v) const;
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::string describe() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace monoevo
