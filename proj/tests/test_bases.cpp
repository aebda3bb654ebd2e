#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spr/bases.hpp"
#include "spr/errors.hpp"

using namespace spr;

namespace {

void expect_orthonormal(const OrthoBasis& b, double tol) {
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      EXPECT_NEAR(std::abs(inner(b.r(i), b.r(j)) - cplx(i == j ? 1.0 : 0.0)), 0.0, tol) << i << "," << j;
}

}  // namespace

TEST(Bases, LacunarySineValues) {
  const auto b = lacunary_sine_basis(4, 4, 2048);
  EXPECT_EQ(b.field(), Field::real);
  for (int n = 1; n <= 4; ++n)
    for (std::size_t a : {0ul, 3ul, 777ul, 2047ul})
      EXPECT_NEAR(b.r(static_cast<std::size_t>(n - 1))[a].real(), oracle::lacunary_sine(4, n, a, 2048), 1e-14);
  expect_orthonormal(b, 1e-13);
}

TEST(Bases, GridMinimumsEnforced) {
  EXPECT_THROW(lacunary_sine_basis(5, 4, 4096), InvalidArgument);  // needs > 4·4⁵
  EXPECT_NO_THROW(lacunary_sine_basis(5, 4, 4097));
  EXPECT_THROW(rudin_2d_basis({1, 2, 5}, 3, 10), InvalidArgument);
  EXPECT_THROW(exponential_basis({1, 7}, 14), InvalidArgument);
  EXPECT_THROW(lacunary_poly_basis({1.0, 0.5}, 4, 2, 1024), InvalidArgument);  // A must exceed 2N
}

TEST(Bases, LacunaryPolyNormalizesAlpha) {
  const auto b = lacunary_poly_basis({1.0, 0.5}, 5, 3, 1024);
  EXPECT_NEAR(b.provenance().normalization_scale, 1.0 / std::sqrt(1.25), 1e-15);
  expect_orthonormal(b, 1e-12);
  // r_1(x) = P(5x) at a grid atom.
  const std::size_t a = 100;
  const cplx expect = (grid_character(5, a, 1024) + 0.5 * grid_character(10, a, 1024)) / std::sqrt(1.25);
  EXPECT_NEAR(std::abs(b.r(0)[a] - expect), 0.0, 1e-14);
  EXPECT_THROW(lacunary_poly_basis({1.0}, 5, 2, 1024), DegenerateBasis);
}

TEST(Bases, Rudin2dFactorizes) {
  const auto b = rudin_2d_basis({1, 2, 5}, 3, 32);
  expect_orthonormal(b, 1e-13);
  const auto& m = *b.measure();
  for (std::size_t a : {0ul, 33ul, 500ul}) {
    const double y = std::sqrt(2.0) * std::sin(2 * std::numbers::pi * 3 * m.y(a));
    const cplx x = std::polar(1.0, 2 * std::numbers::pi * 5 * m.x(a));
    EXPECT_NEAR(std::abs(b.r(2)[a] - y * x), 0.0, 1e-13);
  }
  EXPECT_THROW(rudin_2d_basis({1, 1, 5}, 3, 32), InvalidArgument);
}

TEST(Bases, IidGuards) {
  EXPECT_THROW(iid_basis(support_preset("rademacher"), 3), DegenerateBasis);
  IidOptions loose;
  loose.enforce_hypotheses = false;
  EXPECT_NO_THROW(iid_basis(support_preset("rademacher"), 3, loose));
  EXPECT_THROW(iid_basis({{{1.0, 0}, 0.5}, {{0.0, 0}, 0.5}}, 2), InvalidArgument);  // mean ≠ 0
  const auto t = iid_basis(support_preset("ternary"), 4);
  EXPECT_EQ(t.field(), Field::real);
  EXPECT_EQ(t.measure()->size(), 81u);
  expect_orthonormal(t, 1e-14);
  EXPECT_EQ(iid_basis(support_preset("complex4"), 3).field(), Field::complex);
  EXPECT_THROW(support_preset("gaussian"), InvalidArgument);
}

TEST(Bases, ExponentialIsNotASprCandidate) {
  const auto b = exponential_basis({1, 2, 5}, 32);
  EXPECT_FALSE(b.provenance().spr_candidate);
  expect_orthonormal(b, 1e-14);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(norm_p(b.s(k), 2.0), 0.0, 1e-14);
}

TEST(Bases, ModulusSquaredExpansionIsExact) {
  std::mt19937_64 rng(41);
  const OrthoBasis bases[] = {lacunary_sine_basis(4, 4, 2048), rudin_2d_basis({1, 2, 5}, 3, 32),
                              iid_basis(support_preset("complex4"), 3)};
  for (const auto& b : bases) {
    for (int t = 0; t < 20; ++t) {
      const auto a = oracle::unit_vector(rng, b.size(), b.field() == Field::real);
      const auto f = synthesize(b, a);
      const auto e = expand_modulus_squared(a, b);
      const auto diff = e.synthesize(b) - f.modulus_squared();
      EXPECT_LT(norm_p(diff, kInfinity), 1e-12);
      EXPECT_NEAR(e.constant_term, 1.0, 1e-14);
    }
  }
}

TEST(Bases, SynthesizeChecksShapeAndField) {
  const auto b = lacunary_sine_basis(3, 4, 512);
  EXPECT_THROW(synthesize(b, CoefVec(4, 1.0)), InvalidArgument);
  EXPECT_THROW(synthesize(b, CoefVec{cplx(0, 1)}), InvalidArgument);
  const auto f = synthesize(b, CoefVec{2.0});
  EXPECT_NEAR(norm_p(f - 2.0 * b.r(0), kInfinity), 0.0, 1e-15);
}

TEST(Bases, ConstantsMatchDirectQuadrature) {
  const auto b = rudin_2d_basis({1, 2, 5}, 3, 32);
  const auto c = basis_constants(b);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(c.s_norm_sq[i], 0.5, 1e-13);  // E(2 sin² − 1)² = 1/2
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_NEAR(c.product_norm_sq[i][j], std::pow(norm_p(b.product(i, j), 2.0), 2), 1e-13);
  }
}

TEST(Bases, KindNamesRoundTrip) {
  for (auto k : {BasisKind::lacunary_sine, BasisKind::lacunary_poly, BasisKind::rudin_2d, BasisKind::iid,
                 BasisKind::exponential, BasisKind::custom})
    EXPECT_EQ(basis_kind_from_string(to_string(k)), k);
  EXPECT_THROW(basis_kind_from_string("wavelet"), InvalidArgument);
}
