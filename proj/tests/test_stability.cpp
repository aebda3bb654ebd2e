#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spr/errors.hpp"
#include "spr/hypotheses.hpp"
#include "spr/random.hpp"
#include "spr/stability.hpp"

using namespace spr;

namespace {

CoefVec e(std::size_t m, std::size_t k) {
  CoefVec v(m, 0.0);
  v[k] = 1.0;
  return v;
}

}  // namespace

TEST(PhaseDecompose, Orthogonality) {
  std::mt19937_64 rng(61);
  const auto b = rudin_2d_basis({1, 2, 5}, 3, 32);
  for (int t = 0; t < 20; ++t) {
    const auto f = synthesize(b, oracle::unit_vector(rng, 3, false));
    const auto g = synthesize(b, oracle::unit_vector(rng, 3, false));
    const auto d = phase_decompose(f, g);
    EXPECT_NEAR(std::abs(inner(d.h, g)), 0.0, 1e-14);
    const auto back = d.r * std::polar(1.0, d.theta) * g + d.h;
    EXPECT_LT(norm_p(back - f, kInfinity), 1e-13);
  }
  EXPECT_THROW(phase_decompose(synthesize(b, e(3, 0)), SampledFunction::zero(b.measure())), InvalidArgument);
}

TEST(SprRatio, StatusRules) {
  const auto b = lacunary_sine_basis(3, 4, 512);
  EXPECT_EQ(spr_ratio(b, CoefVec(3, 0.0), CoefVec(3, 0.0), 4.0).status, RatioStatus::negligible);
  // f = −g: identical up to the allowed sign.
  const CoefVec a{0.6, 0.8, 0.0};
  const CoefVec na{-0.6, -0.8, 0.0};
  EXPECT_EQ(spr_ratio(b, a, na, 4.0).status, RatioStatus::negligible);
  const auto r = spr_ratio(b, e(3, 0), e(3, 1), 4.0);
  EXPECT_EQ(r.status, RatioStatus::ok);
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_NEAR(r.ratio, r.numerator / r.denominator, 1e-15);
}

TEST(SprRatio, ExponentialPairViolates) {
  const auto b = exponential_basis({1, 2}, 16);
  const auto r = spr_ratio(b, e(2, 0), e(2, 1), 2.0);
  EXPECT_EQ(r.status, RatioStatus::violation);
  EXPECT_NEAR(r.numerator, std::sqrt(2.0), 1e-12);
}

TEST(SprRatio, ComplexConjugatePairViolates) {
  const auto b = lacunary_sine_basis(2, 4, 128, Field::complex);
  const double h = std::sqrt(0.5);
  const auto r = spr_ratio(b, {h, cplx(0, h)}, {h, cplx(0, -h)}, 4.0);
  EXPECT_EQ(r.status, RatioStatus::violation);
}

TEST(MonteCarlo, DeterministicAndClean) {
  const auto b = iid_basis(support_preset("ternary"), 5);
  const auto r1 = monte_carlo_spr(b, 300, 4.0, 7);
  const auto r2 = monte_carlo_spr(b, 300, 4.0, 7);
  EXPECT_EQ(r1.sup_ratio, r2.sup_ratio);
  EXPECT_EQ(r1.argmax_pair, r2.argmax_pair);
  EXPECT_TRUE(r1.spr_consistent());
  EXPECT_EQ(r1.trials, 300u);
  EXPECT_EQ(r1.evaluated + r1.skipped + r1.violation_count, r1.trials + r1.probes);
  ASSERT_TRUE(r1.theoretical_bound);
  EXPECT_EQ(r1.bound_label, "empirical-C bound");
  EXPECT_LE(r1.sup_ratio, *r1.theoretical_bound);
  EXPECT_NE(monte_carlo_spr(b, 300, 4.0, 8).sup_ratio, r1.sup_ratio);
}

TEST(MonteCarlo, RademacherViolationsAreCounted) {
  IidOptions o;
  o.enforce_hypotheses = false;
  const auto b = iid_basis(support_preset("rademacher"), 4, o);
  const auto r = monte_carlo_spr(b, 50, 2.0, 1);
  EXPECT_FALSE(r.spr_consistent());
  EXPECT_GT(r.violation_count, 0u);
  EXPECT_LE(r.violations.size(), StabilityReport::kMaxStoredViolations);
  EXPECT_EQ(r.violations.front().source, "disjoint");
  EXPECT_FALSE(r.theoretical_bound);
}

TEST(Adversarial, NeverBelowBaseline) {
  const auto b = lacunary_sine_basis(4, 4, 2048);
  const auto base = monte_carlo_spr(b, 100, 4.0, 3);
  const auto adv = adversarial_from(b, base, 3, 30, 3);
  EXPECT_GE(adv.sup_ratio, base.sup_ratio);
  EXPECT_EQ(adv.restart_best.size(), 3u);
  EXPECT_TRUE(adv.spr_consistent());
  // The reported pair reproduces the reported sup.
  const auto again = spr_ratio(b, adv.argmax_pair.first, adv.argmax_pair.second, 4.0);
  EXPECT_NEAR(again.ratio, adv.sup_ratio, 1e-9 * adv.sup_ratio);
  const auto same = adversarial_spr(b, 3, 30, 4.0, 3);
  EXPECT_EQ(same.sup_ratio, adversarial_spr(b, 3, 30, 4.0, 3).sup_ratio);
  EXPECT_THROW(adversarial_spr(b, 0, 10, 4.0, 1), InvalidArgument);
}

TEST(Holder, LacunarySineIsLipschitz) {
  const auto b = lacunary_sine_basis(5, 4, 16384);
  const auto fit = holder_fit(b, 100, 4.0, 5);
  EXPECT_GE(fit.gamma, 0.95);
  EXPECT_GE(fit.decades, 4.0);
  EXPECT_EQ(fit.groups, 10u);
  EXPECT_THROW(holder_fit(b, 5, 4.0, 5), InvalidArgument);
}

TEST(Exponents, ClosedForms) {
  EXPECT_DOUBLE_EQ(interpolation_theta(6.0), 0.25);
  EXPECT_DOUBLE_EQ(fixed_modulus_gamma(6.0), 0.25);
  // θ solves 1/4 = θ/2 + (1−θ)/q.
  for (double q : {5.0, 8.0, 12.0}) {
    const double t = interpolation_theta(q);
    EXPECT_NEAR(t / 2 + (1 - t) / q, 0.25, 1e-15);
  }
  EXPECT_THROW(interpolation_theta(4.0), InvalidArgument);
  EXPECT_THROW(fixed_modulus_gamma(3.0), InvalidArgument);
}

TEST(Lemma, IdentitiesHoldOnRandomPairs) {
  std::mt19937_64 rng(71);
  const OrthoBasis bases[] = {lacunary_sine_basis(5, 4, 16384), rudin_2d_basis({1, 2, 5}, 3, 32),
                              iid_basis(support_preset("ternary"), 5), iid_basis(support_preset("complex4"), 4)};
  for (const auto& b : bases) {
    const LemmaSuite suite(b, check_moments(b).delta);
    for (int t = 0; t < 100; ++t) {
      const bool real = b.field() == Field::real;
      const auto r = suite.evaluate(oracle::unit_vector(rng, b.size(), real), oracle::unit_vector(rng, b.size(), real));
      EXPECT_LT(r.residual_i, 1e-9);
      EXPECT_LT(r.residual_ii, 1e-9);
      EXPECT_TRUE(r.inequality_holds);
      EXPECT_FALSE(r.residual_iv);
    }
  }
}

TEST(Lemma, ExponentialQuarticIdentity) {
  std::mt19937_64 rng(73);
  const auto b = exponential_basis({1, 2, 5, 11}, 64);
  for (int t = 0; t < 50; ++t) {
    const auto r = lemma_identity_suite(b, oracle::unit_vector(rng, 4, false), oracle::unit_vector(rng, 4, false));
    ASSERT_TRUE(r.residual_iv);
    EXPECT_LT(*r.residual_iv, 1e-12);
  }
}

TEST(Lemma, InequalityTightForDisjointPairs) {
  // f = r_1, g = r_2: LHS = ‖|r_1|² − |r_2|²‖² = 2δ' and RHS = δ.
  const auto b = iid_basis(support_preset("ternary"), 3);
  const auto r = lemma_identity_suite(b, e(3, 0), e(3, 1));
  EXPECT_NEAR(r.lhs_iii, 1.0, 1e-13);  // ‖s_1 − s_2‖² = 0.5 + 0.5
  EXPECT_NEAR(r.rhs_iii, 0.5, 1e-13);
}

TEST(BoundCheck, NoAnomaliesOnSprBases) {
  const OrthoBasis bases[] = {rudin_2d_basis({1, 2, 5}, 3, 64), lacunary_sine_basis(5, 4, 16384)};
  for (const auto& b : bases) {
    const double delta = check_moments(b).delta;
    const double c = embedding_constant(b, 4.0, 100, 1).constant;
    for (std::uint64_t t = 0; t < 100; ++t) {
      auto rng = trial_stream(9, 1, t);
      const auto a = random_unit_coeffs(rng, b.size(), b.field());
      const auto bb = random_unit_coeffs(rng, b.size(), b.field());
      const auto bc = proposition_bound_check(b, a, bb, c, delta);
      EXPECT_FALSE(bc.anomaly);
      EXPECT_LT(bc.identity_residual, 1e-12);
      EXPECT_GE(bc.constant_used, c);
    }
  }
  EXPECT_THROW(proposition_bound_check(rudin_2d_basis({1, 2, 5}, 3, 64), e(3, 0), e(3, 1), 1.0, 0.0), InvalidArgument);
}
