#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace monoevo {

enum class DomainKind { interval_dirichlet, torus };

/// Rectangular region: [0,L1]x..x[0,Ld] with Dirichlet walls, or a periodic torus.
struct Domain {
  DomainKind kind = DomainKind::interval_dirichlet;
  int dims = 1;
  std::vector<double> lengths{1.0};

  static Domain interval(double length);
  static Domain box(double lx, double ly);
  static Domain torus(int dims, double length);

  void validate() const;
  double measure() const;
  std::string describe() const;
};

enum class SpaceTag { V, H, Vstar };
enum class NormKind { H, V, Vstar };

/// How many quadrature points per axis relative to the mode cutoff n.
///   quartic_exact: products of four retained modes integrate exactly (>= 4n+1)
///   three_halves:  classic 3/2 padding (>= 3n+1)
///   unpadded:      just enough to represent the span (2n+1)
enum class GridPolicy { quartic_exact, three_halves, unpadded };

enum class Phase { cosine, sine };

struct Mode {
  std::array<int, 3> k{0, 0, 0};  // wavenumber (sine) or wavevector (Fourier)
  Phase phase = Phase::sine;
  int polarization = 0;
  std::array<double, 3> direction{1.0, 0.0, 0.0};  // unit polarization, vector modes
};

namespace detail {
class BasisImpl;
}

/// Orthonormal (in H) spectral family with the V-weights that define the
/// discrete triple. Cheap to copy; the underlying tables are shared and
/// immutable.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::shared_ptr<const detail::BasisImpl> impl);

  const Domain& domain() const;
  int n() const;
  std::size_t size() const;
  std::span<const Mode> modes() const;
  std::span<const double> v_weight() const;
  double lambda_min() const;
  bool vector_valued() const;
  bool divergence_free() const;
  bool is_fourier() const;
  int components() const;

  std::array<int, 3> grid_shape() const;
  std::size_t grid_points() const;
  double quadrature_weight() const;
  std::vector<std::array<double, 3>> grid_nodes() const;

  /// Exponent p of W^{1,p} when V is non-Hilbertian; nullopt means V = H^1.
  std::optional<double> sobolev_exponent() const { return sobolev_p_; }
  Basis with_sobolev_exponent(double p) const;
  bool hilbertian() const { return !sobolev_p_.has_value(); }

  // Transforms. Grid arrays are component-major, gradients [comp][axis][point].
  std::vector<double> synthesize(std::span<const double> coeffs) const;
  std::vector<double> synthesize_gradient(std::span<const double> coeffs) const;
  std::vector<double> analyze(std::span<const double> values) const;
  /// Coefficients of div(flux) in weak form: -sum_{c,i} int flux_{c,i} d_i e_m.
  std::vector<double> analyze_divergence(std::span<const double> flux) const;

  bool same_as(const Basis& other) const;
  bool valid() const { return static_cast<bool>(impl_); }

 private:
  std::shared_ptr<const detail::BasisImpl> impl_;
  std::optional<double> sobolev_p_;

  const detail::BasisImpl& impl() const;
};

Basis build_sine_basis(double length, int n,
                       GridPolicy policy = GridPolicy::quartic_exact);
Basis build_sine_basis(const Domain& domain, int n,
                       GridPolicy policy = GridPolicy::quartic_exact);
Basis build_fourier_basis(const Domain& domain, int n, bool divergence_free,
                          GridPolicy policy = GridPolicy::quartic_exact);

/// Coefficient vector over a basis.
class Field {
 public:
  Field() = default;
  Field(Basis basis, std::vector<double> coeffs, SpaceTag tag = SpaceTag::V);

  static Field zero(const Basis& basis, SpaceTag tag = SpaceTag::V);
  static Field mode(const Basis& basis, std::size_t index, double amplitude = 1.0,
                    SpaceTag tag = SpaceTag::V);

  const Basis& basis() const { return basis_; }
  std::span<const double> coeffs() const { return coeffs_; }
  const std::vector<double>& values() const { return coeffs_; }
  SpaceTag space() const { return tag_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  Field retagged(SpaceTag tag) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Basis basis_;
  std::vector<double> coeffs_;
  SpaceTag tag_ = SpaceTag::V;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);

struct GridValues {
  std::vector<double> values;  // component-major
  int components = 1;
  std::size_t points = 0;
};

struct TripleNorms {
  double h = 0.0;
  double v = 0.0;
  double vstar = 0.0;
  std::map<double, double> lp;
};

double norm(const Field& f, NormKind which);
double pairing(const Field& w, const Field& v);
Field project(const Field& f, std::ptrdiff_t m);
double lp_norm(const Field& f, double p);
GridValues to_grid(const Field& f);
Field from_grid(const GridValues& values, const Basis& basis,
                SpaceTag tag = SpaceTag::Vstar);
TripleNorms triple_norms(const Field& f, std::span<const double> lp_exponents = {});

/// V-norm for W^{1,p}: (sum_i int |d_i u|^p)^{1/p}.
double sobolev_norm(const Field& f, double p);

/// ||e_i||_V for every mode, under the basis's own V-norm.
std::vector<double> mode_v_norms(const Basis& basis);

/// Attainable lower bound for ||f||_{V*}: max_i |<f, e_i>| / ||e_i||_V.
double dual_norm_surrogate(const Field& f);

}  // namespace monoevo
