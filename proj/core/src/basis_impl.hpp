#pragma once

#include <array>
#include <span>
#include <vector>

#include "monoevo/function_space.hpp"

namespace monoevo::detail {

int grid_size(GridPolicy policy, int n, bool fft_friendly);

class BasisImpl {
 public:
  virtual ~BasisImpl() = default;

  Domain domain;
  int n = 0;
  std::vector<Mode> modes;
  std::vector<double> v_weight;
  bool vector_valued = false;
  bool divergence_free = false;
  bool fourier = false;
  int components = 1;
  std::array<int, 3> grid_shape{1, 1, 1};
  std::size_t points = 0;
  double weight = 0.0;

  virtual void synthesize(std::span<const double> coeffs, std::span<double> values) const = 0;
  virtual void synthesize_gradient(std::span<const double> coeffs,
                                   std::span<double> grads) const = 0;
  virtual void analyze(std::span<const double> values, std::span<double> coeffs) const = 0;
  virtual void analyze_divergence(std::span<const double> flux,
                                  std::span<double> coeffs) const = 0;
  virtual std::vector<std::array<double, 3>> nodes() const = 0;
};

}  // namespace monoevo::detail
