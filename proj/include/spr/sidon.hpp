#pragma once

// B_h sequences: integers whose h-fold sums n_{i1} + ... + n_{ih} (i1 ≤ ... ≤ ih)
// are all distinct. h = 2 are Sidon sets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spr::sidon {

enum class Method { greedy, singer };

std::string to_string(Method method);

struct BhSequence {
  std::vector<std::int64_t> terms;
  int h = 2;
  Method method = Method::greedy;
  /// False when greedy generation hit its limit before `count` terms.
  bool complete = true;
  /// Modulus q²+q+1 for Singer sets.
  std::int64_t modulus = 0;
};

/// Colliding index multisets (1-based) with their common sum.
struct Collision {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::int64_t sum = 0;
};

struct Verdict {
  bool ok = true;
  std::optional<Collision> witness;
};

/// Smallest-first greedy: starting from 1, admit each integer that keeps the
/// B_h property, until `count` terms or `limit` is passed.
BhSequence greedy_bh(int h, int count, std::int64_t limit = 100'000'000);

/// Serial reference for greedy_bh.
BhSequence greedy_bh_serial(int h, int count, std::int64_t limit = 100'000'000);

/// Perfect difference set of q+1 residues mod q²+q+1 found by exhaustive search,
/// reported as the lexicographically first such subset of [1, q²+q+1] containing 1 and 2.
BhSequence singer_difference_set(int q, std::uint64_t search_limit = 50'000'000);

/// True iff all h-fold multiset sums of `seq` are distinct.
Verdict verify_bh(const std::vector<std::int64_t>& seq, int h);

/// True iff every nonzero residue mod `modulus` is a difference of two elements exactly once.
bool is_perfect_difference_set(const std::vector<std::int64_t>& set, std::int64_t modulus);

bool is_prime_power(std::int64_t q);

struct DensityProfile {
  std::vector<std::pair<std::int64_t, std::int64_t>> table;  // (N, α(N))
  double fitted_exponent = 0.0;
};

/// α(N) = #{ν : n_ν ≤ N} at each checkpoint, with the least-squares slope of log α
/// against log N. With no checkpoints the terms themselves are used.
DensityProfile density_profile(const std::vector<std::int64_t>& terms, std::vector<std::int64_t> checkpoints = {});

}  // namespace spr::sidon
