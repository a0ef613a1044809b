#include "monoevo/scalar_functions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "monoevo/error.hpp"

namespace monoevo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KindName {
  ScalarKind kind;
  const char* name;
  bool takes_param;
  double default_param;
};

constexpr KindName kNames[] = {
    {ScalarKind::none, "none", false, 0.0},
    {ScalarKind::linear, "linear", true, 1.0},
    {ScalarKind::quadratic, "quadratic", true, 1.0},
    {ScalarKind::allen_cahn, "allen_cahn", false, 0.0},
    {ScalarKind::signed_square, "signed_square", false, 0.0},
    {ScalarKind::clipped_cubic, "clipped_cubic", true, 1.0},
    {ScalarKind::tanh, "tanh", true, 1.0},
    {ScalarKind::constant, "constant", true, 0.0},
};

const KindName& lookup(ScalarKind k) {
  for (const auto& n : kNames)
    if (n.kind == k) return n;
  return kNames[0];
}

}  // namespace

ScalarFunction::ScalarFunction(ScalarKind kind, double param) : kind_(kind), param_(param) {
  if (kind_ == ScalarKind::clipped_cubic && !(param_ > 0.0))
    throw ConfigurationError(fmt::format("clipped_cubic needs a positive clip level, got {}", param_));
  if (!std::isfinite(param_)) throw ConfigurationError("scalar function parameter must be finite");
}

ScalarFunction ScalarFunction::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  for (const auto& n : kNames) {
    if (name != n.name) continue;
    double param = n.default_param;
    if (colon != std::string_view::npos) {
      if (!n.takes_param)
        throw ConfigurationError(fmt::format("function '{}' takes no parameter", n.name));
      const std::string_view rest = spec.substr(colon + 1);
      const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), param);
      if (res.ec != std::errc() || res.ptr != rest.data() + rest.size())
        throw ConfigurationError(fmt::format("bad parameter in function spec '{}'", spec));
    }
    return ScalarFunction(n.kind, param);
  }
  std::string known;
  for (const auto& n : kNames) known += fmt::format("{}{}", known.empty() ? "" : ", ", n.name);
  throw ConfigurationError(fmt::format("unknown function '{}' (known: {})", spec, known));
}

std::string ScalarFunction::spec() const {
  const auto& n = lookup(kind_);
  return n.takes_param ? fmt::format("{}:{}", n.name, param_) : std::string(n.name);
}

double ScalarFunction::operator()(double x) const {
  switch (kind_) {
    case ScalarKind::none: return 0.0;
    case ScalarKind::linear: return param_ * x;
    case ScalarKind::quadratic: return param_ * x * x;
    case ScalarKind::allen_cahn: return x - x * x * x;
    case ScalarKind::signed_square: return x - x * std::abs(x);
    case ScalarKind::clipped_cubic: {
      const double c = std::clamp(x, -param_, param_);
      return x - c * c * c;
    }
    case ScalarKind::tanh: return param_ * std::tanh(x);
    case ScalarKind::constant: return param_;
  }
  return 0.0;
}

double ScalarFunction::derivative(double x) const {
  switch (kind_) {
    case ScalarKind::none: return 0.0;
    case ScalarKind::linear: return param_;
    case ScalarKind::quadratic: return 2.0 * param_ * x;
    case ScalarKind::allen_cahn: return 1.0 - 3.0 * x * x;
    case ScalarKind::signed_square: return 1.0 - 2.0 * std::abs(x);
    case ScalarKind::clipped_cubic:
      return std::abs(x) < param_ ? 1.0 - 3.0 * x * x : 1.0;
    case ScalarKind::tanh: {
      const double c = std::cosh(x);
      return param_ / (c * c);
    }
    case ScalarKind::constant: return 0.0;
  }
  return 0.0;
}

double ScalarFunction::sup_bound() const {
  switch (kind_) {
    case ScalarKind::none: return 0.0;
    case ScalarKind::tanh:
    case ScalarKind::constant: return std::abs(param_);
    case ScalarKind::linear: return param_ == 0.0 ? 0.0 : kInf;
    default: return kInf;
  }
}

double ScalarFunction::lipschitz() const {
  switch (kind_) {
    case ScalarKind::none:
    case ScalarKind::constant: return 0.0;
    case ScalarKind::linear:
    case ScalarKind::tanh: return std::abs(param_);
    default: return kInf;
  }
}

double ScalarFunction::flux_growth() const {
  switch (kind_) {
    case ScalarKind::none:
    case ScalarKind::constant: return 0.0;
    // |c||x+y| |x-y| <= |c| (1+|x|+|y|) |x-y|
    case ScalarKind::quadratic:
    case ScalarKind::linear:
    case ScalarKind::tanh: return std::abs(param_);
    // ||x|x - |y|y| <= (|x| + |y|) |x - y|
    case ScalarKind::signed_square: return 1.0;
    default: return kInf;
  }
}

double ScalarFunction::sign_constant(double sign_power) const {
  switch (kind_) {
    case ScalarKind::none: return 0.0;
    case ScalarKind::linear: return std::max(param_, 0.0);
    case ScalarKind::allen_cahn:
    case ScalarKind::signed_square:
    case ScalarKind::clipped_cubic:
      // g(x) x <= x^2 <= |x|^q + 1 for q >= 2
      return sign_power >= 2.0 ? 1.0 : kInf;
    case ScalarKind::tanh: return std::abs(param_);
    case ScalarKind::constant: return std::abs(param_);
    case ScalarKind::quadratic: return param_ == 0.0 ? 0.0 : kInf;
  }
  return kInf;
}

double ScalarFunction::monotone_constant() const {
  switch (kind_) {
    case ScalarKind::none:
    case ScalarKind::constant: return 0.0;
    case ScalarKind::linear: return std::max(param_, 0.0);
    // identity minus a monotone map
    case ScalarKind::allen_cahn:
    case ScalarKind::signed_square:
    case ScalarKind::clipped_cubic: return 1.0;
    case ScalarKind::tanh: return std::max(param_, 0.0);
    case ScalarKind::quadratic: return param_ == 0.0 ? 0.0 : kInf;
  }
  return kInf;
}

double ScalarFunction::growth_constant(double r) const {
  if (r < 1.0) return kInf;
  switch (kind_) {
    case ScalarKind::none: return 0.0;
    case ScalarKind::constant:
    case ScalarKind::tanh: return std::abs(param_);
    case ScalarKind::linear: return std::abs(param_);
    case ScalarKind::quadratic: return r >= 2.0 ? std::abs(param_) : kInf;
    case ScalarKind::allen_cahn: return r >= 3.0 ? 2.0 : kInf;
    case ScalarKind::signed_square: return r >= 2.0 ? 2.0 : kInf;
    case ScalarKind::clipped_cubic: return 1.0 + param_ * param_ * param_;
  }
  return kInf;
}

// ---------------------------------------------------------------- TimeProfile

TimeProfile TimeProfile::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigurationError(fmt::format("time profile must be finite and >= 0, got {}", value));
  TimeProfile p;
  p.kind_ = value == 0.0 ? Kind::zero : Kind::constant;
  p.value_ = value;
  return p;
}

TimeProfile TimeProfile::table(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.empty())
    throw ConfigurationError("time profile table needs matching, non-empty columns");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] >= 0.0)) throw ConfigurationError("time profile values must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ConfigurationError("time profile times must be strictly increasing");
  }
  TimeProfile p;
  p.kind_ = Kind::table;
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

double TimeProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value_;
    case Kind::table: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - times_.begin());
      const double s = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
      return (1.0 - s) * values_[i - 1] + s * values_[i];
    }
  }
  return 0.0;
}

std::string TimeProfile::describe() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::constant: return fmt::format("constant:{:.17g}", value_);
    case Kind::table: return fmt::format("table[{}]", times_.size());
  }
  return "zero";
}

// ---------------------------------------------------------------- NormPolynomial

NormPolynomial& NormPolynomial::add_lp(double coef, double q, double power) {
  if (coef != 0.0) terms_.push_back(Term{coef, power, Kind::lp, q});
  return *this;
}

NormPolynomial& NormPolynomial::add_v(double coef, double power) {
  if (coef != 0.0) terms_.push_back(Term{coef, power, Kind::v, 2.0});
  return *this;
}

NormPolynomial& NormPolynomial::add_h(double coef, double power) {
  if (coef != 0.0) terms_.push_back(Term{coef, power, Kind::h, 2.0});
  return *this;
}

double NormPolynomial::operator()(const Field& v) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double base = 0.0;
    switch (t.kind) {
      case Kind::lp: base = lp_norm(v, t.q); break;
      case Kind::v: base = norm(v, NormKind::V); break;
      case Kind::h: base = norm(v, NormKind::H); break;
    }
    total += t.coef * std::pow(base, t.power);
  }
  return total;
}

std::string NormPolynomial::describe() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& t : terms_) {
    if (!s.empty()) s += " + ";
    switch (t.kind) {
      case Kind::lp: s += fmt::format("{:.6g}*|v|_L{:.4g}^{:.4g}", t.coef, t.q, t.power); break;
      case Kind::v: s += fmt::format("{:.6g}*|v|_V^{:.4g}", t.coef, t.power); break;
      case Kind::h: s += fmt::format("{:.6g}*|v|_H^{:.4g}", t.coef, t.power); break;
    }
  }
  return s;
}

}  // namespace monoevo
