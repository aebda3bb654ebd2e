#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spr/errors.hpp"
#include "spr/hypotheses.hpp"
#include "spr/sidon.hpp"

using namespace spr;

TEST(Hypotheses, LacunarySineBase4) {
  const auto r = full_report(lacunary_sine_basis(5, 4, 16384));
  EXPECT_EQ(r.verdict, HypothesisVerdict::satisfied);
  EXPECT_NEAR(r.h3_delta(), 0.5, 1e-10);
  EXPECT_LT(r.h1_max_violation(), 1e-10);
  // ‖√2 sin‖₄⁴ = 4·3/8 = 3/2.
  EXPECT_NEAR(r.h2_sup_l4(), std::pow(1.5, 0.25), 1e-12);
}

TEST(Hypotheses, Base3FailsWithHalfWitness) {
  const auto r = full_report(lacunary_sine_basis(3, 3, 512));
  EXPECT_EQ(r.verdict, HypothesisVerdict::failed);
  ASSERT_TRUE(r.orthogonality.witness);
  EXPECT_NEAR(std::abs(r.orthogonality.witness_value), 0.5, 1e-10);
  // The witness pairs an s_n with a product r_i r_j.
  const auto [a, b] = *r.orthogonality.witness;
  EXPECT_TRUE((a.term == FamilyMember::Term::s && b.term == FamilyMember::Term::product) ||
              (b.term == FamilyMember::Term::s && a.term == FamilyMember::Term::product));
}

TEST(Hypotheses, IidClosedFormMoments) {
  for (const char* preset : {"ternary", "complex4"}) {
    const auto r = full_report(iid_basis(support_preset(preset), 5));
    EXPECT_EQ(r.verdict, HypothesisVerdict::satisfied) << preset;
    EXPECT_NEAR(r.h3_delta(), 0.5, 1e-14) << preset;
    EXPECT_NEAR(std::pow(r.h2_sup_l4(), 4), 1.5, 1e-13) << preset;
  }
}

TEST(Hypotheses, RademacherIsDegenerate) {
  IidOptions o;
  o.enforce_hypotheses = false;
  const auto r = full_report(iid_basis(support_preset("rademacher"), 4, o));
  EXPECT_EQ(r.verdict, HypothesisVerdict::degenerate);
  EXPECT_NEAR(r.h3_delta(), 0.0, 1e-15);
}

TEST(Hypotheses, ExponentialIsDegenerate) {
  const auto r = full_report(exponential_basis({1, 2, 5}, 32));
  EXPECT_EQ(r.verdict, HypothesisVerdict::degenerate);
  EXPECT_FALSE(r.moments.h3_passed);
}

TEST(Hypotheses, RudinOnSidonPassesAndOnOneTwoThreeFails) {
  const auto seq = sidon::greedy_bh(2, 4).terms;
  ASSERT_TRUE(sidon::verify_bh(seq, 2).ok);
  const auto good = full_report(rudin_2d_basis(seq, 4, 32));
  EXPECT_TRUE(good.orthogonality.passed);
  EXPECT_LT(good.h1_max_violation(), 1e-10);
  EXPECT_NEAR(good.h3_delta(), 0.5, 1e-12);

  const auto bad = full_report(rudin_2d_basis({1, 2, 3}, 3, 32));
  EXPECT_EQ(bad.verdict, HypothesisVerdict::failed);
  ASSERT_TRUE(bad.orthogonality.witness);
  EXPECT_GT(std::abs(bad.orthogonality.witness_value), 0.1);
}

TEST(Hypotheses, FamilyLabels) {
  FamilyMember p{FamilyMember::Term::product, 0, 2};
  EXPECT_EQ(p.label(Field::complex), "r1*conj(r3)");
  EXPECT_EQ(p.label(Field::real), "r1*r3");
  EXPECT_EQ((FamilyMember{FamilyMember::Term::s, 4, 0}).label(Field::real), "s5");
}

TEST(Hypotheses, SubsamplingIsDeterministic) {
  HypothesisOptions o;
  o.max_family = 20;
  o.full_scan_max = 3;
  o.sampled_pairs = 5;
  o.seed = 9;
  const auto b = lacunary_sine_basis(6, 4, 1 << 15);
  const auto a = full_report(b, o), c = full_report(b, o);
  EXPECT_TRUE(a.orthogonality.subsampled);
  EXPECT_TRUE(a.moments.subsampled);
  EXPECT_EQ(a.orthogonality.max_violation, c.orthogonality.max_violation);
  EXPECT_EQ(a.h3_delta(), c.h3_delta());
}

TEST(Embedding, LowerBoundProperties) {
  const auto b = iid_basis(support_preset("ternary"), 5);
  const auto e = embedding_constant(b, 4.0, 200, 1);
  EXPECT_GE(e.constant, std::pow(1.5, 0.25) - 1e-12);  // a single coordinate already gives this
  EXPECT_EQ(e.probes, 5u + 1u + 10u);
  EXPECT_NEAR(oracle::l2_unit(e.argmax_coeffs), 1.0, 1e-12);
  const auto again = embedding_constant(b, 4.0, 200, 1);
  EXPECT_EQ(e.constant, again.constant);
  EXPECT_NEAR(embedding_constant(b, 2.0, 50, 1).constant, 1.0, 1e-12);
  EXPECT_THROW(embedding_constant(b, 0.5, 1, 1), InvalidArgument);
}
