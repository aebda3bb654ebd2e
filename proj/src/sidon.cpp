#include "spr/sidon.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spr/errors.hpp"

namespace spr::sidon {
namespace {

// Incremental greedy state: the set of h-fold sums already used and the
// (h−1)- and (h−2)-fold sums needed to enumerate the sums a new term creates.
class GreedyState {
 public:
  explicit GreedyState(int h) : h_(h) {}

  const std::vector<std::int64_t>& terms() const { return terms_; }

  // True iff adding c keeps the B_h property. Read-only; safe to call concurrently.
  bool admissible(std::int64_t c, std::vector<std::int64_t>& scratch) const {
    scratch.clear();
    auto probe = [&](std::int64_t s) {
      if (s < static_cast<std::int64_t>(used_.size()) && used_[static_cast<std::size_t>(s)]) return false;
      scratch.push_back(s);
      return true;
    };
    if (h_ == 2) {
      for (auto t : terms_)
        if (!probe(c + t)) return false;
      if (!probe(2 * c)) return false;
    } else {
      for (auto x : pair_sums_)
        if (!probe(c + x)) return false;
      for (auto t : terms_)
        if (!probe(2 * c + t)) return false;
      if (!probe(3 * c)) return false;
    }
    std::sort(scratch.begin(), scratch.end());
    return std::adjacent_find(scratch.begin(), scratch.end()) == scratch.end();
  }

  void admit(std::int64_t c) {
    std::vector<std::int64_t> fresh;
    if (h_ == 2) {
      for (auto t : terms_) fresh.push_back(c + t);
      fresh.push_back(2 * c);
    } else {
      for (auto x : pair_sums_) fresh.push_back(c + x);
      for (auto t : terms_) fresh.push_back(2 * c + t);
      fresh.push_back(3 * c);
      for (auto t : terms_) pair_sums_.push_back(c + t);
      pair_sums_.push_back(2 * c);
    }
    const auto top = static_cast<std::size_t>(*std::max_element(fresh.begin(), fresh.end()));
    if (used_.size() <= top) used_.resize(std::max(top + 1, used_.size() * 2), 0);
    for (auto s : fresh) used_[static_cast<std::size_t>(s)] = 1;
    terms_.push_back(c);
  }

 private:
  int h_;
  std::vector<std::int64_t> terms_;
  std::vector<std::int64_t> pair_sums_;
  std::vector<std::uint8_t> used_;
};

void check_h(int h) {
  if (h != 2 && h != 3) throw InvalidArgument("B_h generation supports h in {2, 3}, got " + std::to_string(h));
}

}  // namespace

std::string to_string(Method method) { return method == Method::greedy ? "greedy" : "singer"; }

BhSequence greedy_bh_serial(int h, int count, std::int64_t limit) {
  check_h(h);
  if (count < 1) throw InvalidArgument("greedy_bh needs count >= 1");
  GreedyState state(h);
  std::vector<std::int64_t> scratch;
  for (std::int64_t c = 1; c <= limit && static_cast<int>(state.terms().size()) < count; ++c)
    if (state.admissible(c, scratch)) state.admit(c);
  BhSequence out;
  out.h = h;
  out.terms = state.terms();
  out.complete = static_cast<int>(out.terms.size()) == count;
  return out;
}

BhSequence greedy_bh(int h, int count, std::int64_t limit) {
  check_h(h);
  if (count < 1) throw InvalidArgument("greedy_bh needs count >= 1");
  GreedyState state(h);
  constexpr std::int64_t kWindow = 256;
  std::int64_t next = 1;
  while (next <= limit && static_cast<int>(state.terms().size()) < count) {
    const std::int64_t hi = std::min(limit + 1, next + kWindow);
    std::int64_t first = hi;
#pragma omp parallel
    {
      std::vector<std::int64_t> scratch;
      std::int64_t local = hi;
#pragma omp for schedule(static)
      for (std::int64_t c = next; c < hi; ++c)
        if (c < local && state.admissible(c, scratch)) local = c;
#pragma omp critical
      first = std::min(first, local);
    }
    if (first < hi) {
      state.admit(first);
      next = first + 1;
    } else {
      next = hi;
    }
  }
  BhSequence out;
  out.h = h;
  out.terms = state.terms();
  out.complete = static_cast<int>(out.terms.size()) == count;
  return out;
}

bool is_prime_power(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t p = 2; p * p <= q; ++p) {
    if (q % p == 0) {
      while (q % p == 0) q /= p;
      return q == 1;
    }
  }
  return true;
}

bool is_perfect_difference_set(const std::vector<std::int64_t>& set, std::int64_t modulus) {
  if (modulus < 2) return false;
  std::vector<int> hits(static_cast<std::size_t>(modulus), 0);
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (i == j) continue;
      std::int64_t d = (set[i] - set[j]) % modulus;
      if (d < 0) d += modulus;
      ++hits[static_cast<std::size_t>(d)];
    }
  if (hits[0] != 0) return false;
  return std::all_of(hits.begin() + 1, hits.end(), [](int h) { return h == 1; });
}

BhSequence singer_difference_set(int q, std::uint64_t search_limit) {
  if (!is_prime_power(q))
    throw InvalidArgument("singer_difference_set needs a prime power q, got " + std::to_string(q));
  const std::int64_t v = static_cast<std::int64_t>(q) * q + q + 1;
  const int k = q + 1;
  std::vector<std::int64_t> chosen{1, 2};
  std::vector<char> diff_used(static_cast<std::size_t>(v), 0);
  diff_used[1] = diff_used[static_cast<std::size_t>(v - 1)] = 1;
  std::uint64_t nodes = 0;

  auto try_add = [&](std::int64_t e, std::vector<std::int64_t>& marked) {
    marked.clear();
    for (auto x : chosen) {
      const std::int64_t d1 = ((e - x) % v + v) % v;
      const std::int64_t d2 = (v - d1) % v;
      if (d1 == 0 || diff_used[static_cast<std::size_t>(d1)] || diff_used[static_cast<std::size_t>(d2)] || d1 == d2) {
        for (auto m : marked) diff_used[static_cast<std::size_t>(m)] = 0;
        marked.clear();
        return false;
      }
      diff_used[static_cast<std::size_t>(d1)] = diff_used[static_cast<std::size_t>(d2)] = 1;
      marked.push_back(d1);
      marked.push_back(d2);
    }
    return true;
  };

  auto search = [&](auto&& self, std::int64_t from) -> bool {
    if (static_cast<int>(chosen.size()) == k) return true;
    if (++nodes > search_limit) throw ResourceLimit("singer search exceeded its node budget");
    const int remaining = k - static_cast<int>(chosen.size());
    std::vector<std::int64_t> marked;
    for (std::int64_t e = from; e + remaining - 1 <= v; ++e) {
      if (!try_add(e, marked)) continue;
      chosen.push_back(e);
      if (self(self, e + 1)) return true;
      chosen.pop_back();
      for (auto m : marked) diff_used[static_cast<std::size_t>(m)] = 0;
    }
    return false;
  };

  if (!search(search, 3))
    throw NotFound("no perfect difference set of size " + std::to_string(k) + " mod " + std::to_string(v));
  BhSequence out;
  out.h = 2;
  out.method = Method::singer;
  out.terms = chosen;
  out.modulus = v;
  return out;
}

Verdict verify_bh(const std::vector<std::int64_t>& seq, int h) {
  if (h < 1) throw InvalidArgument("verify_bh needs h >= 1");
  if (seq.empty()) throw InvalidArgument("verify_bh needs a nonempty sequence");
  std::unordered_map<std::int64_t, std::vector<std::size_t>> seen;
  std::vector<std::size_t> idx(static_cast<std::size_t>(h), 0);
  const std::size_t n = seq.size();
  while (true) {
    std::int64_t s = 0;
    for (auto i : idx) s += seq[i];
    auto [it, inserted] = seen.emplace(s, idx);
    if (!inserted) {
      Collision c;
      for (auto i : it->second) c.first.push_back(i + 1);
      for (auto i : idx) c.second.push_back(i + 1);
      c.sum = s;
      return {false, c};
    }
    // Next nondecreasing index tuple.
    int pos = h - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    const std::size_t v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int p = pos; p < h; ++p) idx[static_cast<std::size_t>(p)] = v;
  }
  return {true, std::nullopt};
}

DensityProfile density_profile(const std::vector<std::int64_t>& terms, std::vector<std::int64_t> checkpoints) {
  auto sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  if (checkpoints.empty()) checkpoints = sorted;
  std::sort(checkpoints.begin(), checkpoints.end());
  DensityProfile out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int points = 0;
  for (auto n : checkpoints) {
    const auto alpha = static_cast<std::int64_t>(std::upper_bound(sorted.begin(), sorted.end(), n) - sorted.begin());
    out.table.emplace_back(n, alpha);
    if (alpha > 0 && n > 0) {
      const double x = std::log(static_cast<double>(n));
      const double y = std::log(static_cast<double>(alpha));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++points;
    }
  }
  const double denom = points * sxx - sx * sx;
  out.fitted_exponent = points >= 2 && denom > 0 ? (points * sxy - sx * sy) / denom : 0.0;
  return out;
}

}  // namespace spr::sidon
