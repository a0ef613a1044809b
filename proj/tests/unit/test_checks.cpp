#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "monoevo/catalog.hpp"
#include "monoevo/checks.hpp"
#include "monoevo/error.hpp"

using namespace monoevo;
using std::numbers::pi;

namespace {

EvolutionProblem heat(int n) { return burgers_rd_1d(BurgersRDParams{}, build_sine_basis(pi, n)); }

EvolutionProblem burgers(int n) {
  BurgersRDParams p;
  p.F = ScalarFunction::parse("quadratic:1");
  return burgers_rd_1d(p, build_sine_basis(pi, n));
}

EvolutionProblem nse(double nu, int n = 4) {
  return navier_stokes_2d(NSEParams{nu, {}}, build_fourier_basis(Domain::torus(2, 2 * pi), n, true));
}

// A = Lap + sign(u): hemicontinuity fails across sign changes.
EvolutionProblem sign_fixture() {
  EvolutionProblem pb = heat(8);
  pb.name = "sign_fixture";
  const Basis b = pb.basis;
  const auto diag = pb.linear_diagonal;
  pb.op = [b, diag](double, std::span<const double> u, std::span<double> out) {
    auto vals = b.synthesize(u);
    for (double& v : vals) v = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    const auto s = b.analyze(vals);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag[i] * u[i] + s[i];
  };
  return pb;
}

}  // namespace

TEST(Apply, LaplacianEigenfunctions) {
  const auto pb = heat(6);
  for (std::size_t k = 0; k < 6; ++k) {
    const Field a = apply(pb, 0.0, Field::mode(pb.basis, k));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a[i], i == k ? -double((k + 1) * (k + 1)) : 0.0, 1e-12);
  }
  EXPECT_EQ(norm(apply(pb, 0.0, Field::zero(pb.basis)), NormKind::H), 0.0);
}

TEST(Apply, NonFiniteOutputIsNumericalFailure) {
  EvolutionProblem pb = heat(4);
  pb.op = [](double, std::span<const double>, std::span<double> out) {
    out[0] = std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_THROW(apply(pb, 0.5, Field::mode(pb.basis, 0)), NumericalFailure);
}

TEST(Hemicontinuity, LinearOperatorHasNoRefinementChange) {
  const auto pb = heat(8);
  const FieldSampler s(pb.basis);
  const auto r = check_hemicontinuity(pb, 0.0, s.draw(0), s.draw(1), s.draw(2));
  EXPECT_EQ(r.status, CheckStatus::pass);
  EXPECT_LT(r.fitted_constants.at("refinement_change"), 1e-12);
}

TEST(Hemicontinuity, BurgersPasses) {
  const auto pb = burgers(8);
  const FieldSampler s(pb.basis);
  EXPECT_EQ(check_hemicontinuity(pb, 0.0, s, 200).status, CheckStatus::pass);
}

TEST(Hemicontinuity, SignForcingIsReported) {
  const auto pb = sign_fixture();
  const FieldSampler s(pb.basis);
  const auto r = check_hemicontinuity(pb, 0.0, s, 50);
  EXPECT_EQ(r.status, CheckStatus::fail);
  EXPECT_FALSE(r.violations.empty());
}

TEST(LocalMonotonicity, IdenticalArguments) {
  const auto pb = burgers(8);
  const Field v = FieldSampler(pb.basis).draw(4);
  const auto r = local_monotonicity_slack(pb, 0.0, v, v);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(LocalMonotonicity, LaplacianIsStronglyMonotone) {
  const auto pb = heat(8);
  const FieldSampler s(pb.basis);
  for (std::size_t i = 0; i < 20; ++i) {
    const Field a = s.draw(i), b = s.draw(i, 1);
    const double w = norm(a - b, NormKind::V);
    EXPECT_NEAR(local_monotonicity_slack(pb, 0.0, a, b).lhs, -w * w, 1e-10 * std::max(1.0, w * w));
  }
  EXPECT_EQ(check_local_monotonicity(pb, 0.0, s, 200).status, CheckStatus::pass);
}

TEST(LocalMonotonicity, NSEWithPaperWeight) {
  for (double nu : {0.1, 1.0}) {
    const auto pb = nse(nu);
    const auto r = check_local_monotonicity(pb, 0.0, FieldSampler(pb.basis), 200);
    EXPECT_EQ(r.status, CheckStatus::pass) << "nu=" << nu;
    EXPECT_TRUE(r.violations.empty());
  }
}

TEST(LocalMonotonicity, SwapSymmetryWhenWeightsAgree) {
  const auto pb = burgers(8);
  ASSERT_EQ(pb.traits.rho.describe(), pb.traits.eta.describe());
  const FieldSampler s(pb.basis);
  for (std::size_t i = 0; i < 20; ++i) {
    const Field a = s.draw(i), b = s.draw(i, 1);
    const auto ab = local_monotonicity_slack(pb, 0.0, a, b);
    const auto ba = local_monotonicity_slack(pb, 0.0, b, a);
    EXPECT_NEAR(ab.lhs, ba.lhs, 1e-10 * std::max(1.0, std::abs(ab.lhs)));
  }
}

TEST(Coercivity, LaplacianDeltaIsExactlyTwo) {
  const auto pb = heat(16);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = check_coercivity(pb, 0.0, FieldSampler(pb.basis, {1.5, {1, 5, 20}, seed}), 300);
    EXPECT_EQ(r.status, CheckStatus::pass);
    EXPECT_NEAR(r.fitted_constants.at("delta_hat"), 2.0, 1e-10);
  }
}

TEST(Coercivity, BurgersAndPLaplace) {
  const auto b = burgers(16);
  EXPECT_EQ(check_coercivity(b, 0.0, FieldSampler(b.basis), 500).status, CheckStatus::pass);
  PLaplaceParams pp;
  pp.p = 4.0;
  const auto pl = p_laplace(pp, build_sine_basis(pi, 16));
  EXPECT_EQ(pl.traits.alpha, 4.0);
  EXPECT_EQ(check_coercivity(pl, 0.0, FieldSampler(pl.basis), 500).status, CheckStatus::pass);
}

TEST(Coercivity, OverclaimedDeltaFails) {
  auto pb = heat(8);
  pb.traits.delta = 10.0;
  const auto r = check_coercivity(pb, 0.0, FieldSampler(pb.basis), 100);
  EXPECT_EQ(r.status, CheckStatus::fail);
  EXPECT_LT(r.min_slack, 0.0);
}

TEST(Growth, LaplacianConstantIsOne) {
  // |Lap v|_{V*} = |v|_V exactly; with beta = 0 the factor (1 + |v|_H^0) is 2, so C = 1 passes and the fit is 1/2
  auto pb = heat(12);
  pb.traits.beta = 0.0;
  const auto r = check_growth(pb, 0.0, FieldSampler(pb.basis), 300);
  EXPECT_EQ(r.status, CheckStatus::pass);
  EXPECT_EQ(pb.traits.c_growth, 1.0);
  EXPECT_NEAR(r.fitted_constants.at("C_hat"), 0.5, 1e-12);
}

TEST(Growth, NSEWithBetaOne) {
  const auto pb = nse(0.5);
  EXPECT_EQ(pb.traits.beta, 1.0);
  EXPECT_EQ(check_growth(pb, 0.0, FieldSampler(pb.basis), 300).status, CheckStatus::pass);
}

TEST(Growth, ZeroArgument) {
  const auto pb = burgers(8);
  const FieldSampler s(pb.basis);
  const auto r = check_growth(pb, 0.0, s, 1);  // sample 0 is the zero field
  EXPECT_EQ(r.status, CheckStatus::pass);
}

TEST(Growth, PLaplaceUsesSurrogate) {
  const auto pl = p_laplace(PLaplaceParams{}, build_sine_basis(pi, 8));
  const auto r = check_growth(pl, 0.0, FieldSampler(pl.basis), 100);
  EXPECT_TRUE(r.surrogate);
  EXPECT_EQ(r.status, CheckStatus::pass);
}

TEST(Uniqueness, NSEGammaTwo) {
  const auto pb = nse(0.5);
  ASSERT_TRUE(pb.traits.uniqueness.has_value());
  EXPECT_EQ(pb.traits.uniqueness->gamma, 2.0);
  EXPECT_NEAR(pb.traits.uniqueness->c_const, 64.0 / 0.125, 1e-12);
  EXPECT_EQ(check_uniqueness_growth(pb.traits, FieldSampler(pb.basis), 500).status, CheckStatus::pass);
}

TEST(Uniqueness, ZeroWeightsAndMissingGamma) {
  const auto pb = heat(8);
  EXPECT_EQ(check_uniqueness_growth(pb.traits, FieldSampler(pb.basis), 100).status, CheckStatus::pass);
  OperatorTraits tr = pb.traits;
  tr.uniqueness.reset();
  const auto r = check_uniqueness_growth(tr, FieldSampler(pb.basis), 100);
  EXPECT_EQ(r.status, CheckStatus::skipped);
  EXPECT_FALSE(r.note.empty());
}

TEST(Uniqueness, ThreeDimensionalAdvectionConstantCoefficients) {
  AdvectionDiffusionParams p;
  p.d = 3;
  p.f = {ScalarFunction::parse("constant:0.5"), ScalarFunction::parse("constant:-1"), ScalarFunction::parse("none")};
  p.g = ScalarFunction::parse("signed_square");
  p.t_exp = 4.0 / 3.0;
  const auto pb = advection_diffusion(p, build_fourier_basis(Domain::torus(3, 2 * pi), 2, false));
  ASSERT_TRUE(pb.traits.uniqueness.has_value());
  EXPECT_NEAR(pb.traits.uniqueness->gamma, 10.0 / 3.0, 1e-15);
  EXPECT_EQ(check_uniqueness_growth(pb.traits, FieldSampler(pb.basis), 300).status, CheckStatus::pass);
}

TEST(Sampler, DeterministicAndNormStratified) {
  const Basis b = build_sine_basis(pi, 8);
  const FieldSampler s(b);
  const Field a = s.draw(5), c = s.draw(5);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a[i], c[i]);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_LE(norm(s.draw(i), NormKind::V), s.radius(i) * (1 + 1e-14));
  EXPECT_NEAR(norm(s.draw_with_norm(3, 0, 7.0), NormKind::V), 7.0, 1e-12);
}

TEST(Sampler, ParallelForCoversEveryIndex) {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw Error("boom");
               }),
               Error);
}
