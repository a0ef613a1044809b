#pragma once

#include <stdexcept>
#include <string>

namespace monoevo {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameters, unknown keys, unsupported combinations.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf or divergence during evaluation or time stepping.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double t = 0.0, double norm_h = 0.0,
                   double norm_v = 0.0)
      : Error(what), t_(t), norm_h_(norm_h), norm_v_(norm_v) {}

  double time() const noexcept { return t_; }
  double norm_h() const noexcept { return norm_h_; }
  double norm_v() const noexcept { return norm_v_; }

 private:
  double t_;
  double norm_h_;
  double norm_v_;
};

/// Requested a norm the basis cannot evaluate in closed form.
class UnsupportedNorm : public Error {
 public:
  using Error::Error;
};

/// Operands live on different bases, or array shapes disagree.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/// Two run directories whose CSV files do not share a schema.
class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace monoevo
