#include <gtest/gtest.h>
#include <omp.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "spr/kernels.hpp"

namespace k = spr::kernels;
using spr::cplx;

namespace {

struct Sample {
  std::vector<cplx> f, g;
  std::vector<double> w;
};

Sample sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Sample s{std::vector<cplx>(n), std::vector<cplx>(n), std::vector<double>(n)};
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s.f[i] = {z(rng), z(rng)};
    s.g[i] = {z(rng), z(rng)};
    s.w[i] = u(rng);
    total += s.w[i];
  }
  for (auto& w : s.w) w /= total;
  return s;
}

// Sizes straddling the reduction block.
const std::size_t kSizes[] = {1, 7, k::kBlock - 1, k::kBlock, k::kBlock + 1, 5 * k::kBlock + 13};

}  // namespace

TEST(Kernels, ParallelMatchesSerialAcrossThreadCounts) {
  for (std::size_t n : kSizes) {
    const auto s = sample(n, n);
    const cplx z = std::polar(1.0, 0.7);
    const auto ref_inner = k::serial::inner(s.f, s.g, s.w);
    const auto ref_p3 = k::serial::shifted_pow_sum(s.f, s.g, z, s.w, 3.0);
    const auto ref_gap = k::serial::modulus_gap_pow_sum(s.f, s.g, s.w, 4.0);
    for (int threads : {1, 2, 3, 4}) {
      omp_set_num_threads(threads);
      // Parallel reductions are blocked, so they agree with the serial loop to rounding.
      EXPECT_NEAR(std::abs(k::inner(s.f, s.g, s.w) - ref_inner), 0.0, 1e-13) << n;
      EXPECT_NEAR(k::shifted_pow_sum(s.f, s.g, z, s.w, 3.0), ref_p3, 1e-12 * ref_p3) << n;
      EXPECT_NEAR(k::modulus_gap_pow_sum(s.f, s.g, s.w, 4.0), ref_gap, 1e-12 * ref_gap) << n;
      EXPECT_EQ(k::max_abs(s.f), k::serial::max_abs(s.f));
    }
    omp_set_num_threads(1);
    const auto one = k::inner(s.f, s.g, s.w);
    omp_set_num_threads(4);
    EXPECT_EQ(one, k::inner(s.f, s.g, s.w)) << "thread count changed the bits at n = " << n;
  }
}

TEST(Kernels, AgainstLongDoubleOracle) {
  const auto s = sample(3000, 11);
  EXPECT_NEAR(std::abs(k::inner(s.f, s.g, s.w) - oracle::inner(s.f, s.g, s.w)), 0.0, 1e-14);
  for (double p : {1.0, 2.0, 2.5, 4.0, 6.0}) {
    const double expect = std::pow(oracle::lp_norm(s.f, s.w, p), p);
    EXPECT_NEAR(k::abs_pow_sum(s.f, s.w, p), expect, 1e-12 * expect) << p;
  }
}

TEST(Kernels, ShiftedInfinityIsMax) {
  const auto s = sample(500, 3);
  const cplx z{0.0, 1.0};
  double m = 0;
  for (std::size_t i = 0; i < s.f.size(); ++i) m = std::max(m, std::abs(s.f[i] - z * s.g[i]));
  EXPECT_EQ(k::shifted_pow_sum(s.f, s.g, z, s.w, INFINITY), m);
}

TEST(Kernels, QuarticMomentsReproduceTheFourthPower) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = sample(777, seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
    const cplx z0 = std::polar(1.0, u(rng));
    const auto mom = k::quartic_moments(s.f, s.g, z0, s.w);
    const auto ser = k::serial::quartic_moments(s.f, s.g, z0, s.w);
    EXPECT_NEAR(mom.dd2, ser.dd2, 1e-12 * ser.dd2);
    for (int t = 0; t < 5; ++t) {
      const cplx z = std::polar(1.0, u(rng));
      const cplx eps = z / z0 - 1.0;
      const double direct = k::serial::shifted_pow_sum(s.f, s.g, z, s.w, 4.0);
      EXPECT_NEAR(mom.eval(eps), direct, 1e-10 * direct);
    }
  }
}

TEST(Kernels, LinearCombination) {
  const auto s = sample(k::kBlock + 5, 9);
  std::vector<std::span<const cplx>> cols{s.f, s.g};
  const std::vector<cplx> c{{0.5, 1.0}, {-2.0, 0.25}};
  std::vector<cplx> par(s.f.size()), ser(s.f.size());
  k::linear_combination(cols, c, par);
  k::serial::linear_combination(cols, c, ser);
  EXPECT_EQ(par, ser);
  EXPECT_EQ(par[17], c[0] * s.f[17] + c[1] * s.g[17]);
}

TEST(Kernels, PowAbsFastPaths) {
  for (double x : {0.0, 0.3, 1.7, 12.5}) {
    for (double p : {1.0, 2.0, 3.0, 4.0, 6.0, 2.5})
      EXPECT_NEAR(k::pow_abs(-x, p), std::pow(x, p), 1e-15 * std::max(1.0, std::pow(x, p)));
  }
}
