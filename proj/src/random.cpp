#include "spr/random.hpp"

#include <cmath>

namespace spr {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index));
}

CoefVec random_unit_coeffs(std::mt19937_64& rng, std::size_t m, Field field) {
  std::normal_distribution<double> normal;
  CoefVec a(m);
  double norm_sq = 0.0;
  while (norm_sq == 0.0) {
    norm_sq = 0.0;
    for (auto& c : a) {
      const double re = normal(rng);
      const double im = field == Field::complex ? normal(rng) : 0.0;
      c = {re, im};
      norm_sq += std::norm(c);
    }
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto& c : a) c *= scale;
  return a;
}

}  // namespace spr
