#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "basis_impl.hpp"
#include "monoevo/error.hpp"

namespace monoevo {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AxisTables {
  double length = 1.0;
  int m = 0;
  Eigen::MatrixXd values;  // m x n: sqrt(2/L) sin(k pi x_j / L)
  Eigen::MatrixXd deriv;   // m x n: derivative of the above
};

AxisTables make_axis(double length, int n, int m) {
  AxisTables t;
  t.length = length;
  t.m = m;
  t.values.resize(m, n);
  t.deriv.resize(m, n);
  const double scale = std::sqrt(2.0 / length);
  for (int j = 0; j < m; ++j) {
    const double x = (j + 0.5) * length / m;
    for (int k = 1; k <= n; ++k) {
      const double w = k * std::numbers::pi / length;
      t.values(j, k - 1) = scale * std::sin(w * x);
      t.deriv(j, k - 1) = scale * w * std::cos(w * x);
    }
  }
  return t;
}

// Tensor-product Dirichlet sine family on an interval or a box, midpoint quadrature.
class SineBasis final : public detail::BasisImpl {
 public:
  SineBasis(const Domain& dom, int n_modes, GridPolicy policy) {
    domain = dom;
    n = n_modes;
    fourier = false;
    components = 1;
    const int m = detail::grid_size(policy, n_modes, false);
    for (int a = 0; a < dom.dims; ++a) axes_.push_back(make_axis(dom.lengths[a], n_modes, m));
    grid_shape = {m, dom.dims > 1 ? m : 1, 1};
    points = static_cast<std::size_t>(grid_shape[0]) * grid_shape[1];
    weight = dom.measure() / static_cast<double>(points);

    if (dom.dims == 1) {
      for (int k = 1; k <= n; ++k) {
        modes.push_back(Mode{{k, 0, 0}, Phase::sine, 0, {1.0, 0.0, 0.0}});
        v_weight.push_back(k * std::numbers::pi / dom.lengths[0]);
      }
    } else {
      for (int k1 = 1; k1 <= n; ++k1) {
        for (int k2 = 1; k2 <= n; ++k2) {
          modes.push_back(Mode{{k1, k2, 0}, Phase::sine, 0, {1.0, 0.0, 0.0}});
          const double a = k1 / dom.lengths[0];
          const double b = k2 / dom.lengths[1];
          v_weight.push_back(std::numbers::pi * std::sqrt(a * a + b * b));
        }
      }
    }
  }

  void synthesize(std::span<const double> c, std::span<double> out) const override {
    if (domain.dims == 1) {
      Eigen::Map<Eigen::VectorXd>(out.data(), axes_[0].m) =
          axes_[0].values * Eigen::Map<const Eigen::VectorXd>(c.data(), n);
      return;
    }
    Eigen::Map<const RowMat> cm(c.data(), n, n);
    Eigen::Map<RowMat>(out.data(), axes_[0].m, axes_[1].m) =
        axes_[0].values * cm * axes_[1].values.transpose();
  }

  void synthesize_gradient(std::span<const double> c, std::span<double> out) const override {
    if (domain.dims == 1) {
      Eigen::Map<Eigen::VectorXd>(out.data(), axes_[0].m) =
          axes_[0].deriv * Eigen::Map<const Eigen::VectorXd>(c.data(), n);
      return;
    }
    Eigen::Map<const RowMat> cm(c.data(), n, n);
    const std::size_t p = points;
    Eigen::Map<RowMat>(out.data(), axes_[0].m, axes_[1].m) =
        axes_[0].deriv * cm * axes_[1].values.transpose();
    Eigen::Map<RowMat>(out.data() + p, axes_[0].m, axes_[1].m) =
        axes_[0].values * cm * axes_[1].deriv.transpose();
  }

  void analyze(std::span<const double> v, std::span<double> c) const override {
    if (domain.dims == 1) {
      Eigen::Map<Eigen::VectorXd>(c.data(), n) =
          weight * axes_[0].values.transpose() *
          Eigen::Map<const Eigen::VectorXd>(v.data(), axes_[0].m);
      return;
    }
    Eigen::Map<const RowMat> g(v.data(), axes_[0].m, axes_[1].m);
    Eigen::Map<RowMat>(c.data(), n, n) =
        weight * axes_[0].values.transpose() * g * axes_[1].values;
  }

  void analyze_divergence(std::span<const double> flux, std::span<double> c) const override {
    if (domain.dims == 1) {
      Eigen::Map<Eigen::VectorXd>(c.data(), n) =
          -weight * axes_[0].deriv.transpose() *
          Eigen::Map<const Eigen::VectorXd>(flux.data(), axes_[0].m);
      return;
    }
    const std::size_t p = points;
    Eigen::Map<const RowMat> gx(flux.data(), axes_[0].m, axes_[1].m);
    Eigen::Map<const RowMat> gy(flux.data() + p, axes_[0].m, axes_[1].m);
    Eigen::Map<RowMat>(c.data(), n, n) =
        -weight * (axes_[0].deriv.transpose() * gx * axes_[1].values +
                   axes_[0].values.transpose() * gy * axes_[1].deriv);
  }

  std::vector<std::array<double, 3>> nodes() const override {
    std::vector<std::array<double, 3>> out;
    out.reserve(points);
    const int m0 = grid_shape[0];
    const int m1 = grid_shape[1];
    for (int i = 0; i < m0; ++i) {
      const double x = (i + 0.5) * domain.lengths[0] / m0;
      for (int j = 0; j < m1; ++j) {
        const double y = domain.dims > 1 ? (j + 0.5) * domain.lengths[1] / m1 : 0.0;
        out.push_back({x, y, 0.0});
      }
    }
    return out;
  }

 private:
  std::vector<AxisTables> axes_;
};

}  // namespace

Basis build_sine_basis(const Domain& domain, int n, GridPolicy policy) {
  domain.validate();
  if (domain.kind != DomainKind::interval_dirichlet)
    throw ConfigurationError("sine basis requires an interval_dirichlet domain");
  if (n < 1) throw ConfigurationError("sine basis: n must be >= 1, got " + std::to_string(n));
  return Basis(std::make_shared<SineBasis>(domain, n, policy));
}

Basis build_sine_basis(double length, int n, GridPolicy policy) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigurationError("sine basis: length must be positive");
  return build_sine_basis(Domain::interval(length), n, policy);
}

}  // namespace monoevo
