#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "monoevo/checks.hpp"
#include "monoevo/error.hpp"
#include "monoevo/function_space.hpp"

using namespace monoevo;
using std::numbers::pi;

namespace {

Field combo(const Basis& b, std::initializer_list<std::pair<std::size_t, double>> terms) {
  Field f = Field::zero(b);
  for (auto [i, a] : terms) f += Field::mode(b, i, a);
  return f;
}

double max_gram_error(const Basis& b) {
  double err = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto gi = to_grid(Field::mode(b, i));
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto gj = to_grid(Field::mode(b, j));
      double s = 0.0;
      for (std::size_t k = 0; k < gi.values.size(); ++k) s += gi.values[k] * gj.values[k];
      err = std::max(err, std::abs(s * b.quadrature_weight() - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

}  // namespace

TEST(SineBasis, WeightsAreWavenumbersOnPi) {
  const Basis b = build_sine_basis(pi, 3);
  ASSERT_EQ(b.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(b.v_weight()[k], k + 1.0, 1e-14);
}

TEST(SineBasis, WeightsScaleWithLength) {
  const Basis b = build_sine_basis(2 * pi, 2);
  EXPECT_NEAR(b.v_weight()[0], 0.5, 1e-14);
  EXPECT_NEAR(b.v_weight()[1], 1.0, 1e-14);
}

TEST(SineBasis, SingleModeIsNormalized) {
  const Basis b = build_sine_basis(pi, 1);
  EXPECT_NEAR(max_gram_error(b), 0.0, 1e-12);
}

TEST(SineBasis, RejectsBadArguments) {
  EXPECT_THROW(build_sine_basis(pi, 0), ConfigurationError);
  EXPECT_THROW(build_sine_basis(-1.0, 4), ConfigurationError);
}

TEST(Orthonormality, EveryBasisKind) {
  EXPECT_LT(max_gram_error(build_sine_basis(pi, 12)), 1e-12);
  EXPECT_LT(max_gram_error(build_sine_basis(Domain::box(pi, 2.0), 4)), 1e-12);
  EXPECT_LT(max_gram_error(build_fourier_basis(Domain::torus(2, 2 * pi), 3, false)), 1e-12);
  EXPECT_LT(max_gram_error(build_fourier_basis(Domain::torus(2, 2 * pi), 3, true)), 1e-12);
  EXPECT_LT(max_gram_error(build_fourier_basis(Domain::torus(3, 2 * pi), 1, true)), 1e-12);
}

TEST(FourierBasis, TaylorGreenFieldIsRetained) {
  const Basis b = build_fourier_basis(Domain::torus(2, 2 * pi), 1, true);
  // (sin x cos y, -cos x sin y) sampled on the grid and analyzed back
  const auto nodes = b.grid_nodes();
  GridValues g{std::vector<double>(2 * nodes.size()), 2, nodes.size()};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.values[i] = std::sin(nodes[i][0]) * std::cos(nodes[i][1]);
    g.values[nodes.size() + i] = -std::cos(nodes[i][0]) * std::sin(nodes[i][1]);
  }
  const Field f = from_grid(g, b, SpaceTag::H);
  EXPECT_NEAR(norm(f, NormKind::H), std::sqrt(2.0) * pi, 1e-12);
}

TEST(FourierBasis, GradientFieldsAreExcluded) {
  const Basis b = build_fourier_basis(Domain::torus(2, 2 * pi), 1, true);
  const auto nodes = b.grid_nodes();
  GridValues g{std::vector<double>(2 * nodes.size()), 2, nodes.size()};
  for (std::size_t i = 0; i < nodes.size(); ++i) {  // grad(sin x sin y)
    g.values[i] = std::cos(nodes[i][0]) * std::sin(nodes[i][1]);
    g.values[nodes.size() + i] = std::sin(nodes[i][0]) * std::cos(nodes[i][1]);
  }
  EXPECT_LT(norm(from_grid(g, b, SpaceTag::H), NormKind::H), 1e-12);
}

TEST(FourierBasis, ThreeTorusModeCount) {
  // nonzero k with |k|_inf <= 1: 26 vectors, 13 pairs +-k, each giving cos and sin
  const Basis b = build_fourier_basis(Domain::torus(3, 2 * pi), 1, false);
  EXPECT_EQ(b.size(), 26u);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto g = to_grid(Field::mode(b, i));
    double mean = 0.0;
    for (double v : g.values) mean += v;
    EXPECT_NEAR(mean * b.quadrature_weight(), 0.0, 1e-12);
  }
}

TEST(FourierBasis, DivergenceFreeOnScalarDomainRejected) {
  EXPECT_THROW(build_fourier_basis(Domain::interval(pi), 2, true), ConfigurationError);
}

TEST(Norms, SecondModeOnPi) {
  const Basis b = build_sine_basis(pi, 4);
  const Field e2 = Field::mode(b, 1);
  EXPECT_NEAR(norm(e2, NormKind::H), 1.0, 1e-14);
  EXPECT_NEAR(norm(e2, NormKind::V), 2.0, 1e-14);
  EXPECT_NEAR(norm(e2, NormKind::Vstar), 0.5, 1e-14);
}

TEST(Norms, ZeroField) {
  const Field z = Field::zero(build_sine_basis(pi, 4));
  EXPECT_EQ(norm(z, NormKind::H), 0.0);
  EXPECT_EQ(norm(z, NormKind::V), 0.0);
  EXPECT_EQ(norm(z, NormKind::Vstar), 0.0);
}

TEST(Norms, DualNormUnsupportedForSobolevV) {
  const Basis b = build_sine_basis(pi, 4).with_sobolev_exponent(4.0);
  EXPECT_THROW(norm(Field::mode(b, 0), NormKind::Vstar), UnsupportedNorm);
}

TEST(Norms, Ordering) {
  const FieldSampler sampler(build_fourier_basis(Domain::torus(2, 2 * pi), 4, true));
  const double inv = 1.0 / std::sqrt(sampler.basis().lambda_min());
  for (std::size_t i = 0; i < 50; ++i) {
    const Field f = sampler.draw(i);
    EXPECT_LE(norm(f, NormKind::Vstar), inv * norm(f, NormKind::H) * (1 + 1e-14));
    EXPECT_LE(norm(f, NormKind::H), inv * norm(f, NormKind::V) * (1 + 1e-14));
  }
}

TEST(Pairing, OrthonormalityAndLinearity) {
  const Basis b = build_sine_basis(pi, 4);
  const Field e1 = Field::mode(b, 0), e2 = Field::mode(b, 1);
  EXPECT_NEAR(pairing(e1, e1), 1.0, 1e-14);
  EXPECT_NEAR(pairing(e1, e2), 0.0, 1e-14);
  EXPECT_NEAR(pairing(combo(b, {{0, 2.0}, {1, 3.0}}), e2), 3.0, 1e-14);
}

TEST(Pairing, BasisMismatch) {
  EXPECT_THROW(pairing(Field::mode(build_sine_basis(pi, 4), 0), Field::mode(build_sine_basis(pi, 5), 0)),
               BasisMismatch);
}

TEST(Pairing, DualNormIsAttained) {
  const FieldSampler sampler(build_sine_basis(pi, 8));
  const Field w = sampler.draw(3);
  std::vector<double> c(w.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = w[i] / std::pow(w.basis().v_weight()[i], 2);
  const Field v(w.basis(), c);
  EXPECT_NEAR(pairing(w, v), norm(w, NormKind::Vstar) * norm(v, NormKind::V), 1e-12);
}

TEST(Project, Truncates) {
  const Basis b = build_sine_basis(pi, 6);
  const Field p = project(combo(b, {{0, 2.0}, {4, 3.0}}), 3);
  EXPECT_EQ(p[0], 2.0);
  EXPECT_EQ(p[4], 0.0);
  EXPECT_THROW(project(p, -1), Error);
}

TEST(Project, Contracts) {
  const FieldSampler sampler(build_sine_basis(pi, 10));
  for (std::size_t i = 0; i < 20; ++i) {
    const Field f = sampler.draw(i);
    for (std::ptrdiff_t m = 0; m <= 10; ++m) {
      EXPECT_LE(norm(project(f, m), NormKind::H), norm(f, NormKind::H));
      EXPECT_LE(norm(project(f, m), NormKind::V), norm(f, NormKind::V));
    }
  }
}

TEST(LpNorm, FirstSineModeFourthPower) {
  const Basis b = build_sine_basis(pi, 5);
  EXPECT_NEAR(std::pow(lp_norm(Field::mode(b, 0), 4.0), 4.0), 3.0 / (2.0 * pi), 1e-12);
  EXPECT_EQ(lp_norm(Field::zero(b), 3.0), 0.0);
  EXPECT_THROW(lp_norm(Field::mode(b, 0), 0.5), Error);
}

TEST(LpNorm, TorusNormalizedProduct) {
  const Basis b = build_fourier_basis(Domain::torus(2, 2 * pi), 2, false);
  const auto nodes = b.grid_nodes();
  GridValues g{std::vector<double>(nodes.size()), 1, nodes.size()};
  for (std::size_t i = 0; i < nodes.size(); ++i) g.values[i] = std::sin(nodes[i][0]) * std::sin(nodes[i][1]) / pi;
  EXPECT_NEAR(lp_norm(from_grid(g, b, SpaceTag::H), 2.0), 1.0, 1e-12);
}

TEST(Grid, RoundTrip) {
  const Basis b = build_sine_basis(pi, 8);
  const Field back = from_grid(to_grid(Field::mode(b, 0)), b, SpaceTag::V);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(back[i], i == 0 ? 1.0 : 0.0, 1e-12);
  GridValues wrong{std::vector<double>(3), 1, 3};
  EXPECT_THROW(from_grid(wrong, b), Error);
}

TEST(Grid, SquareOfFirstModeHasOnlySymmetricContent) {
  // sin^2 x is symmetric about pi/2, so its coefficients on even sine modes vanish
  const Basis b = build_sine_basis(pi, 8);
  auto g = to_grid(Field::mode(b, 0));
  for (double& v : g.values) v = v * v;
  const Field sq = from_grid(g, b, SpaceTag::H);
  for (std::size_t i = 1; i < b.size(); i += 2) EXPECT_NEAR(sq[i], 0.0, 1e-12);
  // odd k: (2/pi)^{3/2} * 4 / (k (4 - k^2)); three sine factors are outside the exact class of the
  // midpoint rule, so only quadrature accuracy is expected here
  for (std::size_t i = 0; i < b.size(); i += 2) {
    const double k = i + 1.0;
    EXPECT_NEAR(sq[i], std::pow(2.0 / pi, 1.5) * 4.0 / (k * (4.0 - k * k)), 1e-5);
  }
}

TEST(Grid, TopModeFluxHasNoAliasing) {
  // int e_8^2 d/dx e_k = 0 for every retained k: sin^2(8x) = (1 - cos 16x)/2 is orthogonal to cos kx, k <= 8
  for (auto policy : {GridPolicy::quartic_exact, GridPolicy::three_halves}) {
    const Basis b = build_sine_basis(pi, 8, policy);
    auto g = to_grid(Field::mode(b, 7));
    for (double& v : g.values) v *= v;
    const Field flux = Field(b, b.analyze_divergence(g.values), SpaceTag::Vstar);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(flux[i], 0.0, 1e-10);
  }
}
