#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "basis_impl.hpp"
#include "monoevo/error.hpp"

namespace monoevo {
namespace {

using cplx = std::complex<double>;

// fftw_plan_* is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

PlanHandle make_plan(int dims, int m, int sign) {
  std::array<int, 3> shape{m, m, m};
  const std::size_t total = static_cast<std::size_t>(std::pow(m, dims) + 0.5);
  std::vector<cplx> in(total), out(total);
  std::lock_guard lock(planner_mutex());
  fftw_plan p = fftw_plan_dft(dims, shape.data(), reinterpret_cast<fftw_complex*>(in.data()),
                              reinterpret_cast<fftw_complex*>(out.data()), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw NumericalFailure("fftw planner failed");
  return PlanHandle(p);
}

struct ModeTable {
  std::size_t index = 0;  // flat FFT index of the wavevector
  std::array<double, 3> kappa{0, 0, 0};
};

class FourierBasis final : public detail::BasisImpl {
 public:
  FourierBasis(const Domain& dom, int n_cut, bool div_free, GridPolicy policy) {
    domain = dom;
    n = n_cut;
    fourier = true;
    divergence_free = div_free;
    vector_valued = div_free;
    components = div_free ? dom.dims : 1;
    const int d = dom.dims;
    m_ = detail::grid_size(policy, n_cut, true);
    grid_shape = {m_, m_, d == 3 ? m_ : 1};
    points = static_cast<std::size_t>(m_) * m_ * (d == 3 ? m_ : 1);
    weight = dom.measure() / static_cast<double>(points);
    scale_ = std::sqrt(2.0 / dom.measure());

    std::vector<std::array<int, 3>> reps;
    const int lo = -n_cut;
    for (int a = lo; a <= n_cut; ++a)
      for (int b = lo; b <= n_cut; ++b)
        for (int c = (d == 3 ? lo : 0); c <= (d == 3 ? n_cut : 0); ++c) {
          std::array<int, 3> k{a, b, c};
          int first = 0;
          for (int i = 0; i < d; ++i)
            if (k[i] != 0) {
              first = k[i];
              break;
            }
          if (first > 0) reps.push_back(k);
        }
    std::sort(reps.begin(), reps.end());

    for (const auto& k : reps) {
      std::array<double, 3> kappa{0, 0, 0};
      double k2 = 0.0;
      for (int i = 0; i < d; ++i) {
        kappa[i] = 2.0 * std::numbers::pi * k[i] / dom.lengths[i];
        k2 += kappa[i] * kappa[i];
      }
      const double kn = std::sqrt(k2);
      std::vector<std::array<double, 3>> pols;
      if (!div_free) {
        pols.push_back({1.0, 0.0, 0.0});
      } else if (d == 2) {
        pols.push_back({-kappa[1] / kn, kappa[0] / kn, 0.0});
      } else {
        pols = transverse_pair(kappa, kn);
      }
      for (Phase ph : {Phase::cosine, Phase::sine}) {
        for (std::size_t p = 0; p < pols.size(); ++p) {
          modes.push_back(Mode{k, ph, static_cast<int>(p), pols[p]});
          v_weight.push_back(kn);
          table_.push_back(ModeTable{flat_index(k), kappa});
        }
      }
    }

    forward_ = make_plan(d, m_, FFTW_FORWARD);
    backward_ = make_plan(d, m_, FFTW_BACKWARD);
  }

  void synthesize(std::span<const double> c, std::span<double> out) const override {
    std::vector<cplx> spec(points), grid(points);
    for (int comp = 0; comp < components; ++comp) {
      std::fill(spec.begin(), spec.end(), cplx{});
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const double a = c[m] * scale_ * polarization(m, comp);
        if (a != 0.0) spec[table_[m].index] += phase_factor(m) * a;
      }
      backward(spec, grid);
      for (std::size_t j = 0; j < points; ++j) out[comp * points + j] = grid[j].real();
    }
  }

  void synthesize_gradient(std::span<const double> c, std::span<double> out) const override {
    const int d = domain.dims;
    std::vector<cplx> spec(points), grid(points);
    for (int comp = 0; comp < components; ++comp) {
      for (int axis = 0; axis < d; ++axis) {
        std::fill(spec.begin(), spec.end(), cplx{});
        for (std::size_t m = 0; m < modes.size(); ++m) {
          const double a = c[m] * scale_ * polarization(m, comp) * table_[m].kappa[axis];
          if (a != 0.0) spec[table_[m].index] += cplx{0.0, 1.0} * phase_factor(m) * a;
        }
        backward(spec, grid);
        const std::size_t off = (static_cast<std::size_t>(comp) * d + axis) * points;
        for (std::size_t j = 0; j < points; ++j) out[off + j] = grid[j].real();
      }
    }
  }

  void analyze(std::span<const double> v, std::span<double> c) const override {
    std::fill(c.begin(), c.end(), 0.0);
    std::vector<cplx> grid(points), spec(points);
    for (int comp = 0; comp < components; ++comp) {
      for (std::size_t j = 0; j < points; ++j) grid[j] = v[comp * points + j];
      forward(grid, spec);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const cplx g = spec[table_[m].index];
        const double proj = modes[m].phase == Phase::cosine ? g.real() : -g.imag();
        c[m] += weight * scale_ * polarization(m, comp) * proj;
      }
    }
  }

  void analyze_divergence(std::span<const double> flux, std::span<double> c) const override {
    const int d = domain.dims;
    std::fill(c.begin(), c.end(), 0.0);
    std::vector<cplx> grid(points), spec(points);
    for (int comp = 0; comp < components; ++comp) {
      for (int axis = 0; axis < d; ++axis) {
        const std::size_t off = (static_cast<std::size_t>(comp) * d + axis) * points;
        for (std::size_t j = 0; j < points; ++j) grid[j] = flux[off + j];
        forward(grid, spec);
        for (std::size_t m = 0; m < modes.size(); ++m) {
          const cplx g = spec[table_[m].index];
          const double k = table_[m].kappa[axis];
          // d_i cos = -k sin, d_i sin = k cos
          const double proj = modes[m].phase == Phase::cosine ? -k * g.imag() : -k * g.real();
          c[m] += weight * scale_ * polarization(m, comp) * proj;
        }
      }
    }
  }

  std::vector<std::array<double, 3>> nodes() const override {
    std::vector<std::array<double, 3>> out;
    out.reserve(points);
    const int d = domain.dims;
    const int m2 = d == 3 ? m_ : 1;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        for (int l = 0; l < m2; ++l)
          out.push_back({domain.lengths[0] * i / m_, domain.lengths[1] * j / m_,
                         d == 3 ? domain.lengths[2] * l / m_ : 0.0});
    return out;
  }

 private:
  int m_ = 0;
  double scale_ = 1.0;
  std::vector<ModeTable> table_;
  PlanHandle forward_;
  PlanHandle backward_;

  static std::vector<std::array<double, 3>> transverse_pair(const std::array<double, 3>& kappa,
                                                            double kn) {
    std::array<double, 3> khat{kappa[0] / kn, kappa[1] / kn, kappa[2] / kn};
    int axis = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(khat[i]) < std::abs(khat[axis])) axis = i;
    std::array<double, 3> a{0, 0, 0};
    a[axis] = 1.0;
    const double dot = a[0] * khat[0] + a[1] * khat[1] + a[2] * khat[2];
    std::array<double, 3> p1{a[0] - dot * khat[0], a[1] - dot * khat[1], a[2] - dot * khat[2]};
    const double n1 = std::sqrt(p1[0] * p1[0] + p1[1] * p1[1] + p1[2] * p1[2]);
    for (auto& x : p1) x /= n1;
    std::array<double, 3> p2{khat[1] * p1[2] - khat[2] * p1[1], khat[2] * p1[0] - khat[0] * p1[2],
                             khat[0] * p1[1] - khat[1] * p1[0]};
    return {p1, p2};
  }

  std::size_t flat_index(const std::array<int, 3>& k) const {
    auto wrap = [this](int v) { return static_cast<std::size_t>(((v % m_) + m_) % m_); };
    if (domain.dims == 2) return wrap(k[0]) * m_ + wrap(k[1]);
    return (wrap(k[0]) * m_ + wrap(k[1])) * m_ + wrap(k[2]);
  }

  double polarization(std::size_t m, int comp) const {
    return vector_valued ? modes[m].direction[comp] : 1.0;
  }

  cplx phase_factor(std::size_t m) const {
    return modes[m].phase == Phase::cosine ? cplx{1.0, 0.0} : cplx{0.0, -1.0};
  }

  void forward(std::vector<cplx>& in, std::vector<cplx>& out) const {
    fftw_execute_dft(forward_.get(), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }
  void backward(std::vector<cplx>& in, std::vector<cplx>& out) const {
    fftw_execute_dft(backward_.get(), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }
};

}  // namespace

Basis build_fourier_basis(const Domain& domain, int n, bool divergence_free, GridPolicy policy) {
  domain.validate();
  if (domain.kind != DomainKind::torus) {
    if (divergence_free)
      throw ConfigurationError("divergence_free requires a vector basis on a torus domain");
    throw ConfigurationError("Fourier basis requires a torus domain");
  }
  if (n < 1) throw ConfigurationError("Fourier basis: n must be >= 1, got " + std::to_string(n));
  return Basis(std::make_shared<FourierBasis>(domain, n, divergence_free, policy));
}

}  // namespace monoevo
