#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monoevo/checks.hpp"
#include "monoevo/error.hpp"
#include "monoevo/inequalities.hpp"

using namespace monoevo;
using std::numbers::pi;

TEST(Gronwall, ClosedForms) {
  const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> zero(5, 0.0);
  EXPECT_NEAR(gronwall_bound(1.0, 2.0, zero, t).back(), std::exp(2.0), 1e-12);

  std::vector<double> t2(201), one(201, 1.0);
  for (int i = 0; i <= 200; ++i) t2[i] = 0.01 * i;
  EXPECT_NEAR(gronwall_bound(1.0, 0.0, one, t2).back(), 3.0, 1e-12);
}

TEST(Gronwall, ExponentialForcing) {
  std::vector<double> t(2001), f(2001);
  for (int i = 0; i <= 2000; ++i) {
    t[i] = i / 2000.0;
    f[i] = std::exp(t[i]);
  }
  EXPECT_NEAR(gronwall_bound(0.5, 1.0, f, t).back(), 1.5 * std::numbers::e, 1e-9);
}

TEST(Gronwall, RejectsNegativeInputs) {
  const std::vector<double> t{0.0, 1.0};
  EXPECT_THROW(gronwall_bound(-1.0, 0.0, std::vector<double>{0.0, 0.0}, t), Error);
  EXPECT_THROW(gronwall_bound(1.0, 0.0, std::vector<double>{0.0, -1.0}, t), Error);
}

TEST(Gronwall, MonotoneInEveryArgument) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const std::vector<double> t{0.0, 0.3, 0.6, 1.0};
  for (int s = 0; s < 100; ++s) {
    const double g0 = u(rng), c = u(rng) - 1.0;
    std::vector<double> f{u(rng), u(rng), u(rng), u(rng)}, f2 = f;
    for (double& x : f2) x += u(rng);
    const auto base = gronwall_bound(g0, c, f, t);
    const auto more_g = gronwall_bound(g0 + 0.1, c, f, t);
    const auto more_c = gronwall_bound(g0, c + 0.1, f, t);
    const auto more_f = gronwall_bound(g0, c, f2, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
      EXPECT_GE(more_g[k], base[k]);
      EXPECT_GE(more_c[k], base[k]);
      EXPECT_GE(more_f[k], base[k]);
    }
  }
}

TEST(Ladyzhenskaya, ZeroFieldIsEquality) {
  const auto r2 = ladyzhenskaya_2d(Field::zero(build_sine_basis(Domain::box(pi, pi), 4)));
  EXPECT_EQ(r2.lhs, 0.0);
  EXPECT_EQ(r2.rhs, 0.0);
  EXPECT_TRUE(r2.holds);
  const auto r3 = ladyzhenskaya_3d(Field::zero(build_fourier_basis(Domain::torus(3, 2 * pi), 2, false)));
  EXPECT_EQ(r3.slack, 0.0);
  EXPECT_TRUE(r3.holds);
}

TEST(Ladyzhenskaya, WrongDimension) {
  EXPECT_THROW(ladyzhenskaya_2d(Field::mode(build_sine_basis(pi, 4), 0)), Error);
  EXPECT_THROW(ladyzhenskaya_3d(Field::mode(build_sine_basis(Domain::box(pi, pi), 3), 0)), Error);
}

TEST(Ladyzhenskaya, RandomFields2D) {
  for (int n : {2, 5, 8}) {
    const FieldSampler s(build_sine_basis(Domain::box(pi, 2.0), n), {0.5, {1.0, 5.0, 20.0}, 11});
    for (std::size_t i = 0; i < 70; ++i) EXPECT_TRUE(ladyzhenskaya_2d(s.draw(i)).holds) << "n=" << n << " i=" << i;
  }
}

TEST(Ladyzhenskaya, RandomFields3D) {
  for (int n : {1, 2, 3}) {
    const FieldSampler s(build_fourier_basis(Domain::torus(3, 2 * pi), n, false), {0.5, {1.0, 5.0, 20.0}, 11});
    for (std::size_t i = 0; i < 70; ++i) EXPECT_TRUE(ladyzhenskaya_3d(s.draw(i)).holds) << "n=" << n << " i=" << i;
  }
}

TEST(Ladyzhenskaya, QuarticScaling) {
  const FieldSampler s(build_sine_basis(Domain::box(pi, pi), 5));
  const Field u = s.draw(2);
  const auto a = ladyzhenskaya_2d(u);
  const auto b = ladyzhenskaya_2d(3.0 * u);
  EXPECT_NEAR(b.lhs / a.lhs, 81.0, 81.0 * 1e-10);
  EXPECT_NEAR(b.rhs / a.rhs, 81.0, 81.0 * 1e-10);
}

TEST(Interpolation, AdvectionExponents) {
  const Basis b = build_sine_basis(Domain::box(pi, pi), 4);
  const auto r = interpolation_bound(Field::mode(b, 0), 2.0, 14.0 / 5.0, 6.0, 3.0 / 7.0);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.lhs, 0.0);
  const auto z = interpolation_bound(Field::zero(b), 2.0, 14.0 / 5.0, 6.0, 3.0 / 7.0);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_TRUE(z.holds);
}

TEST(Interpolation, ExponentRelationEnforced) {
  const Basis b = build_sine_basis(pi, 4);
  EXPECT_THROW(interpolation_bound(Field::mode(b, 0), 2.0, 3.0, 6.0, 3.0 / 7.0), Error);
}

TEST(Young, Constant) {
  EXPECT_NEAR(young_constant(2.0, 2.0, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(young_constant(3.0, 1.5, 0.1), std::pow(0.3, -0.5) / 1.5, 1e-15);
}

TEST(Young, Splits) {
  const auto z = young_split(0.0, 0.0, 2.0, 2.0, 0.5);
  EXPECT_EQ(z.slack, 0.0);
  EXPECT_TRUE(z.holds);

  const auto r = young_split(2.0, 5.0, 3.0, 1.5, 0.1);
  EXPECT_DOUBLE_EQ(r.lhs, 10.0);
  EXPECT_NEAR(r.rhs, 0.8 + std::pow(0.3, -0.5) / 1.5 * std::pow(5.0, 1.5), 1e-12);
  EXPECT_TRUE(r.holds);

  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(0.2);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(young_split(e(rng), e(rng), 2.0, 2.0, 0.5).holds);

  EXPECT_THROW(young_split(1.0, 1.0, 2.0, 3.0, 0.5), Error);
}
