#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "monoevo/catalog.hpp"
#include "monoevo/checks.hpp"
#include "monoevo/error.hpp"

using namespace monoevo;
using std::numbers::pi;

namespace {

Basis torus2(int n) { return build_fourier_basis(Domain::torus(2, 2 * pi), n, true); }
Basis torus3(int n) { return build_fourier_basis(Domain::torus(3, 2 * pi), n, true); }

double k2(const Mode& m) { return m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2]; }

}  // namespace

TEST(Forcing, ParseAndDescribe) {
  EXPECT_TRUE(ForcingSpec::parse("none").is_zero());
  const auto f = ForcingSpec::parse("mode:2:0.5");
  EXPECT_EQ(f.mode, 2u);
  EXPECT_EQ(f.amplitude, 0.5);
  EXPECT_EQ(ForcingSpec::parse(f.describe()).amplitude, 0.5);
  const auto c = f.coefficients(build_sine_basis(pi, 4));
  EXPECT_EQ(c[1], 0.5);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_THROW(ForcingSpec::parse("mode:x:1"), ConfigurationError);
  EXPECT_THROW(ForcingSpec::parse("sin"), ConfigurationError);
}

TEST(BurgersFamily, Names) {
  BurgersRDParams p;
  EXPECT_EQ(burgers_rd_1d(p, build_sine_basis(pi, 4)).name, "heat");
  p.F = ScalarFunction::parse("quadratic:1");
  EXPECT_EQ(burgers_rd_1d(p, build_sine_basis(pi, 4)).name, "burgers");
  p.F = {};
  p.g = ScalarFunction::parse("allen_cahn");
  EXPECT_EQ(burgers_rd_1d(p, build_sine_basis(pi, 4)).name, "reaction_diffusion");
}

TEST(BurgersFamily, RejectsWrongBasis) {
  EXPECT_THROW(burgers_rd_1d({}, build_sine_basis(Domain::box(pi, pi), 3)), ConfigurationError);
}

TEST(BurgersFamily, RejectsReactionOutsideBound) {
  BurgersRDParams p;
  p.g = ScalarFunction::parse("quadratic:1");  // g(x) x ~ x^3 is not one-sided bounded
  EXPECT_THROW(burgers_rd_1d(p, build_sine_basis(pi, 4)), ConfigurationError);
}

TEST(Advection, ReducesToHeat) {
  AdvectionDiffusionParams p;
  p.f = {ScalarFunction{}, ScalarFunction{}};
  p.g = ScalarFunction{};
  const Basis b = build_sine_basis(Domain::box(pi, pi), 3);
  const auto pb = advection_diffusion(p, b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Field a = apply(pb, 0.0, Field::mode(b, i));
    EXPECT_NEAR(a[i], -k2(b.modes()[i]), 1e-12);
    EXPECT_NEAR(norm(a, NormKind::H), k2(b.modes()[i]), 1e-12);
  }
}

TEST(Advection, BoxWithSigmoidsPassesChecks) {
  AdvectionDiffusionParams p;
  p.f = {ScalarFunction::parse("tanh:1"), ScalarFunction::parse("tanh:0.5")};
  p.g = ScalarFunction::parse("signed_square");
  const auto pb = advection_diffusion(p, build_sine_basis(Domain::box(pi, pi), 4));
  const FieldSampler s(pb.basis);
  EXPECT_EQ(check_local_monotonicity(pb, 0.0, s, 200).status, CheckStatus::pass);
  EXPECT_EQ(check_coercivity(pb, 0.0, s, 200).status, CheckStatus::pass);
  EXPECT_EQ(check_growth(pb, 0.0, s, 200).status, CheckStatus::pass);
}

TEST(Advection, UnsupportedCombinations) {
  AdvectionDiffusionParams p;
  p.f = {ScalarFunction::parse("tanh:1"), ScalarFunction::parse("tanh:1")};
  p.g = ScalarFunction::parse("signed_square");
  EXPECT_THROW(advection_diffusion(p, build_fourier_basis(Domain::torus(2, 2 * pi), 2, false)), ConfigurationError);
  p.r = 3.0;
  EXPECT_THROW(advection_diffusion(p, build_sine_basis(Domain::box(pi, pi), 3)), ConfigurationError);
  p.r = 7.0 / 3.0;
  p.t_exp = 3.0;
  EXPECT_THROW(advection_diffusion(p, build_sine_basis(Domain::box(pi, pi), 3)), ConfigurationError);
  p.d = 4;
  EXPECT_THROW(advection_diffusion(p, build_sine_basis(Domain::box(pi, pi), 3)), ConfigurationError);
}

TEST(Advection, ThreeDimensionsNeedsTorus) {
  AdvectionDiffusionParams p;
  p.d = 3;
  p.f.assign(3, ScalarFunction::parse("tanh:1"));
  p.g = ScalarFunction::parse("signed_square");
  EXPECT_THROW(advection_diffusion(p, build_sine_basis(Domain::box(pi, pi), 3)), ConfigurationError);
  EXPECT_NO_THROW(advection_diffusion(p, build_fourier_basis(Domain::torus(3, 2 * pi), 1, false)));
}

TEST(PLaplace, RequiresPAboveTwo) {
  PLaplaceParams p;
  p.p = 2.0;
  EXPECT_THROW(p_laplace(p, build_sine_basis(pi, 4)), ConfigurationError);
  p.p = 1.5;
  EXPECT_THROW(p_laplace(p, build_sine_basis(pi, 4)), ConfigurationError);
}

TEST(PLaplace, EqualArgumentsGiveZero) {
  const auto pb = p_laplace(PLaplaceParams{}, build_sine_basis(pi, 8));
  const Field v = FieldSampler(pb.basis).draw(2);
  EXPECT_EQ(local_monotonicity_slack(pb, 0.0, v, v).lhs, 0.0);
}

TEST(PLaplace, ClippedCubicIsUniquenessEligible) {
  PLaplaceParams p;
  p.p = 3.0;
  p.g = ScalarFunction::parse("clipped_cubic:2");
  p.s = 2.0;
  const auto pb = p_laplace(p, build_sine_basis(pi, 8));
  ASSERT_TRUE(pb.traits.uniqueness.has_value());
  EXPECT_EQ(check_uniqueness_growth(pb.traits, FieldSampler(pb.basis), 200).status, CheckStatus::pass);
}

TEST(PLaplace, FirstModeClosedForm) {
  // u = a e_1, p = 4: <A(u), e_1> = -a^3 (2/pi)^2 int_0^pi cos^4 = -3 a^3 / (2 pi); odd-even symmetry kills e_2
  const Basis b = build_sine_basis(pi, 4);
  const auto pb = p_laplace(PLaplaceParams{}, b);
  const double a = 1.7;
  const Field out = apply(pb, 0.0, Field::mode(pb.basis, 0, a));
  EXPECT_NEAR(out[0], -3.0 * a * a * a / (2.0 * pi), 1e-10);
  EXPECT_NEAR(out[1], 0.0, 1e-12);
  EXPECT_EQ(norm(apply(pb, 0.0, Field::zero(pb.basis)), NormKind::H), 0.0);
}

TEST(NSE, RejectsScalarBasis) {
  EXPECT_THROW(navier_stokes_2d({}, build_fourier_basis(Domain::torus(2, 2 * pi), 2, false)), ConfigurationError);
  EXPECT_THROW(navier_stokes_2d({0.0, {}}, torus2(2)), ConfigurationError);
}

TEST(NSE, Traits) {
  const auto pb = navier_stokes_2d({0.2, {}}, torus2(3));
  EXPECT_EQ(pb.traits.delta, 0.2);
  EXPECT_NEAR(pb.traits.margin.coefficient, 0.1, 1e-15);
  EXPECT_TRUE(pb.traits.rho.is_zero());
  const Field v = FieldSampler(pb.basis).draw(1);
  EXPECT_NEAR(pb.traits.eta(v), 32.0 / 0.008 * std::pow(lp_norm(v, 4.0), 4.0), 1e-9 * pb.traits.eta(v));
}

TEST(NSE, TrilinearIdentityAndAntisymmetry) {
  const Basis b = torus2(4);
  const FieldSampler s(b);
  for (std::size_t i = 0; i < 100; ++i) {
    const Field u = s.draw(i), v = s.draw(i, 1), w = s.draw(i, 2);
    const double scale = norm(u, NormKind::V) * norm(v, NormKind::V) * norm(v, NormKind::V);
    EXPECT_NEAR(pairing(advective_term(u, v), v), 0.0, 1e-10 * std::max(1.0, scale));
    EXPECT_NEAR(pairing(advective_term(u, v), w), -pairing(advective_term(u, w), v), 1e-10 * std::max(1.0, scale));
  }
}

TEST(NSE, TaylorGreenNonlinearityVanishes) {
  const Basis b = torus2(8);
  const Field tg = taylor_green(b);
  EXPECT_NEAR(norm(tg, NormKind::H) * norm(tg, NormKind::H), 2 * pi * pi, 1e-10);
  EXPECT_LT(norm(advective_term(tg, tg), NormKind::H), 1e-10);
}

TEST(Leray, SmootherFactors) {
  const Basis b = torus3(1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Field e = Field::mode(b, i);
    const double kk = k2(b.modes()[i]);
    const Field s = helmholtz_smooth(e, 1.0);
    EXPECT_NEAR(s[i], 1.0 / (1.0 + kk), 1e-15);
    if (kk == 2.0) EXPECT_NEAR(s[i], 1.0 / 3.0, 1e-15);
    if (kk == 1.0) EXPECT_NEAR(s[i], 0.5, 1e-15);
    EXPECT_EQ(helmholtz_smooth(e, 0.0)[i], 1.0);
  }
  EXPECT_THROW(helmholtz_smooth(Field::mode(build_sine_basis(pi, 3), 0), 1.0), ConfigurationError);
}

TEST(Leray, RoundTripAndTrilinear) {
  const Basis b = torus3(2);
  const FieldSampler s(b);
  for (std::size_t i = 0; i < 20; ++i) {
    const Field u = s.draw(i), v = s.draw(i, 1);
    EXPECT_LT(norm(helmholtz_apply(helmholtz_smooth(u, 0.7), 0.7) - u, NormKind::H), 1e-12 * std::max(1.0, norm(u, NormKind::H)));
    EXPECT_NEAR(pairing(advective_term(u, v, 1.0), v), 0.0, 1e-10 * std::max(1.0, std::pow(norm(v, NormKind::V), 3)));
  }
}

TEST(Leray, LargeSmoothingKillsNonlinearity) {
  const Basis b = torus3(1);
  const Field u = FieldSampler(b).draw(3);
  const double base = norm(advective_term(u, u, 1.0), NormKind::H);
  const double smooth = norm(advective_term(u, u, 1e4), NormKind::H);
  EXPECT_LT(smooth, 1e-7 * base);
}

TEST(Catalog, Names) {
  const auto& n = catalog_names();
  EXPECT_EQ(n.size(), 7u);
  EXPECT_EQ(n.front(), "burgers");
  EXPECT_EQ(n.back(), "leray_alpha_3d");
}
