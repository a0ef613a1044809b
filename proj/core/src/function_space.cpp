#include "monoevo/function_space.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "basis_impl.hpp"
#include "monoevo/error.hpp"

namespace monoevo {

namespace detail {

namespace {
bool smooth_235(int v) {
  for (int f : {2, 3, 5})
    while (v % f == 0) v /= f;
  return v == 1;
}
}  // namespace

int grid_size(GridPolicy policy, int n, bool fft_friendly) {
  int m = 0;
  switch (policy) {
    case GridPolicy::quartic_exact: m = fft_friendly ? 4 * n + 1 : 4 * n + 2; break;
    case GridPolicy::three_halves: m = 3 * n + 1; break;
    case GridPolicy::unpadded: return 2 * n + 1;
  }
  if (fft_friendly)
    while (!smooth_235(m)) ++m;
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------- Domain

Domain Domain::interval(double length) {
  Domain d{DomainKind::interval_dirichlet, 1, {length}};
  d.validate();
  return d;
}

Domain Domain::box(double lx, double ly) {
  Domain d{DomainKind::interval_dirichlet, 2, {lx, ly}};
  d.validate();
  return d;
}

Domain Domain::torus(int dims, double length) {
  Domain d{DomainKind::torus, dims, std::vector<double>(std::max(dims, 0), length)};
  d.validate();
  return d;
}

void Domain::validate() const {
  if (kind == DomainKind::interval_dirichlet && (dims < 1 || dims > 2))
    throw ConfigurationError(fmt::format("interval_dirichlet domain needs dims in {{1,2}}, got {}", dims));
  if (kind == DomainKind::torus && (dims < 2 || dims > 3))
    throw ConfigurationError(fmt::format("torus domain needs dims in {{2,3}}, got {}", dims));
  if (static_cast<int>(lengths.size()) != dims)
    throw ConfigurationError(fmt::format("domain has {} lengths for {} dims", lengths.size(), dims));
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l))
      throw ConfigurationError(fmt::format("domain length must be positive, got {}", l));
}

double Domain::measure() const {
  return std::accumulate(lengths.begin(), lengths.end(), 1.0, std::multiplies<>());
}

std::string Domain::describe() const {
  std::string s = kind == DomainKind::torus ? "torus" : (dims == 1 ? "interval" : "box");
  s += "[";
  for (std::size_t i = 0; i < lengths.size(); ++i)
    s += fmt::format("{}{:.6g}", i ? "x" : "", lengths[i]);
  return s + "]";
}

// ---------------------------------------------------------------- Basis

Basis::Basis(std::shared_ptr<const detail::BasisImpl> impl) : impl_(std::move(impl)) {}

const detail::BasisImpl& Basis::impl() const {
  if (!impl_) throw BasisMismatch("operation on an empty basis");
  return *impl_;
}

const Domain& Basis::domain() const { return impl().domain; }
int Basis::n() const { return impl().n; }
std::size_t Basis::size() const { return impl().modes.size(); }
std::span<const Mode> Basis::modes() const { return impl().modes; }
std::span<const double> Basis::v_weight() const { return impl().v_weight; }
bool Basis::vector_valued() const { return impl().vector_valued; }
bool Basis::divergence_free() const { return impl().divergence_free; }
bool Basis::is_fourier() const { return impl().fourier; }
int Basis::components() const { return impl().components; }
std::array<int, 3> Basis::grid_shape() const { return impl().grid_shape; }
std::size_t Basis::grid_points() const { return impl().points; }
double Basis::quadrature_weight() const { return impl().weight; }
std::vector<std::array<double, 3>> Basis::grid_nodes() const { return impl().nodes(); }

double Basis::lambda_min() const {
  const auto w = v_weight();
  const double m = *std::min_element(w.begin(), w.end());
  return m * m;
}

Basis Basis::with_sobolev_exponent(double p) const {
  if (!(p >= 2.0)) throw ConfigurationError(fmt::format("Sobolev exponent must be >= 2, got {}", p));
  Basis b = *this;
  if (p == 2.0)
    b.sobolev_p_.reset();
  else
    b.sobolev_p_ = p;
  return b;
}

bool Basis::same_as(const Basis& other) const {
  return impl_ == other.impl_ && sobolev_p_ == other.sobolev_p_;
}

std::vector<double> Basis::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() != size())
    throw BasisMismatch(fmt::format("synthesize: {} coefficients for {} modes", coeffs.size(), size()));
  std::vector<double> out(grid_points() * components());
  impl().synthesize(coeffs, out);
  return out;
}

std::vector<double> Basis::synthesize_gradient(std::span<const double> coeffs) const {
  if (coeffs.size() != size())
    throw BasisMismatch(fmt::format("synthesize_gradient: {} coefficients for {} modes",
                                    coeffs.size(), size()));
  std::vector<double> out(grid_points() * components() * domain().dims);
  impl().synthesize_gradient(coeffs, out);
  return out;
}

std::vector<double> Basis::analyze(std::span<const double> values) const {
  if (values.size() != grid_points() * components())
    throw BasisMismatch(fmt::format("analyze: {} grid values, expected {}", values.size(),
                                    grid_points() * components()));
  std::vector<double> out(size());
  impl().analyze(values, out);
  return out;
}

std::vector<double> Basis::analyze_divergence(std::span<const double> flux) const {
  const std::size_t expect = grid_points() * components() * domain().dims;
  if (flux.size() != expect)
    throw BasisMismatch(fmt::format("analyze_divergence: {} flux values, expected {}", flux.size(), expect));
  std::vector<double> out(size());
  impl().analyze_divergence(flux, out);
  return out;
}

// ---------------------------------------------------------------- Field

Field::Field(Basis basis, std::vector<double> coeffs, SpaceTag tag)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)), tag_(tag) {
  if (coeffs_.size() != basis_.size())
    throw BasisMismatch(fmt::format("field has {} coefficients, basis has {} modes", coeffs_.size(),
                                    basis_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!std::isfinite(coeffs_[i]))
      throw NumericalFailure(fmt::format("non-finite coefficient at mode {}", i));
}

Field Field::zero(const Basis& basis, SpaceTag tag) {
  return Field(basis, std::vector<double>(basis.size(), 0.0), tag);
}

Field Field::mode(const Basis& basis, std::size_t index, double amplitude, SpaceTag tag) {
  if (index >= basis.size())
    throw BasisMismatch(fmt::format("mode index {} out of range ({} modes)", index, basis.size()));
  std::vector<double> c(basis.size(), 0.0);
  c[index] = amplitude;
  return Field(basis, std::move(c), tag);
}

Field Field::retagged(SpaceTag tag) const {
  Field f = *this;
  f.tag_ = tag;
  return f;
}

namespace {
void require_same(const Basis& a, const Basis& b, const char* what) {
  if (!a.same_as(b)) throw BasisMismatch(fmt::format("{}: operands live on different bases", what));
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same(basis_, other.basis_, "operator+");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same(basis_, other.basis_, "operator-");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

// ---------------------------------------------------------------- norms

double sobolev_norm(const Field& f, double p) {
  const auto grad = f.basis().synthesize_gradient(f.coeffs());
  double sum = 0.0;
  for (double g : grad) sum += std::pow(std::abs(g), p);
  return std::pow(sum * f.basis().quadrature_weight(), 1.0 / p);
}

double norm(const Field& f, NormKind which) {
  const auto c = f.coeffs();
  const auto w = f.basis().v_weight();
  double s = 0.0;
  switch (which) {
    case NormKind::H:
      for (double x : c) s += x * x;
      return std::sqrt(s);
    case NormKind::V:
      if (auto p = f.basis().sobolev_exponent()) return sobolev_norm(f, *p);
      for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * c[i] * w[i] * w[i];
      return std::sqrt(s);
    case NormKind::Vstar:
      if (!f.basis().hilbertian())
        throw UnsupportedNorm(
            "V* norm is not available in closed form for a W^{1,p} basis; use a pairing bound");
      for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * c[i] / (w[i] * w[i]);
      return std::sqrt(s);
  }
  return 0.0;
}

double pairing(const Field& w, const Field& v) {
  require_same(w.basis(), v.basis(), "pairing");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

Field project(const Field& f, std::ptrdiff_t m) {
  if (m < 0) throw ConfigurationError(fmt::format("project: m must be >= 0, got {}", m));
  if (static_cast<std::size_t>(m) > f.size())
    throw ConfigurationError(fmt::format("project: m = {} exceeds mode count {}", m, f.size()));
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  std::fill(c.begin() + m, c.end(), 0.0);
  return Field(f.basis(), std::move(c), f.space());
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw ConfigurationError(fmt::format("lp_norm: p must be >= 1, got {}", p));
  const Basis& b = f.basis();
  const auto vals = b.synthesize(f.coeffs());
  const std::size_t n = b.grid_points();
  const int comps = b.components();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double mag2 = 0.0;
    for (int c = 0; c < comps; ++c) mag2 += vals[c * n + j] * vals[c * n + j];
    sum += std::pow(mag2, 0.5 * p);
  }
  return std::pow(sum * b.quadrature_weight(), 1.0 / p);
}

GridValues to_grid(const Field& f) {
  return GridValues{f.basis().synthesize(f.coeffs()), f.basis().components(),
                    f.basis().grid_points()};
}

Field from_grid(const GridValues& values, const Basis& basis, SpaceTag tag) {
  if (values.components != basis.components() || values.points != basis.grid_points() ||
      values.values.size() != values.points * static_cast<std::size_t>(values.components))
    throw BasisMismatch(fmt::format("grid shape {}x{} does not match basis grid {}x{}",
                                    values.components, values.points, basis.components(),
                                    basis.grid_points()));
  return Field(basis, basis.analyze(values.values), tag);
}

TripleNorms triple_norms(const Field& f, std::span<const double> lp_exponents) {
  TripleNorms t;
  t.h = norm(f, NormKind::H);
  t.v = norm(f, NormKind::V);
  t.vstar = f.basis().hilbertian() ? norm(f, NormKind::Vstar) : dual_norm_surrogate(f);
  for (double p : lp_exponents) t.lp[p] = lp_norm(f, p);
  return t;
}

std::vector<double> mode_v_norms(const Basis& basis) {
  if (basis.hilbertian()) return {basis.v_weight().begin(), basis.v_weight().end()};
  std::vector<double> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    out[i] = norm(Field::mode(basis, i), NormKind::V);
  return out;
}

double dual_norm_surrogate(const Field& f) {
  const auto w = mode_v_norms(f.basis());
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i]) / w[i]);
  return best;
}

}  // namespace monoevo
