#include "spr/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "spr/errors.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

constexpr std::uint64_t kSubsampleStream = 0x4f52;
constexpr std::uint64_t kEmbeddingStream = 0x454d;

std::vector<FamilyMember> orthogonality_family(std::size_t m, Field field) {
  std::vector<FamilyMember> fam;
  fam.push_back({FamilyMember::Term::one, 0, 0});
  for (std::size_t i = 0; i < m; ++i) fam.push_back({FamilyMember::Term::s, i, 0});
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      if (j == k || (field == Field::real && j > k)) continue;
      fam.push_back({FamilyMember::Term::product, j, k});
    }
  return fam;
}

SampledFunction materialize(const OrthoBasis& basis, const FamilyMember& member) {
  switch (member.term) {
    case FamilyMember::Term::one: return SampledFunction::constant(basis.measure(), 1.0);
    case FamilyMember::Term::s: return basis.s(member.i);
    case FamilyMember::Term::product: return basis.product(member.i, member.j);
  }
  throw InvalidArgument("bad family member");
}

// Replace the running maximum only on a clear increase, so ties keep the first witness.
bool clearly_greater(double v, double best) { return v > best + 1e-12 * std::max(1.0, best); }

}  // namespace

std::string FamilyMember::label(Field field) const {
  switch (term) {
    case Term::one: return "1";
    case Term::s: return "s" + std::to_string(i + 1);
    case Term::product:
      if (field == Field::real) return "r" + std::to_string(i + 1) + "*r" + std::to_string(j + 1);
      return "r" + std::to_string(i + 1) + "*conj(r" + std::to_string(j + 1) + ")";
  }
  return "?";
}

std::string to_string(HypothesisVerdict verdict) {
  switch (verdict) {
    case HypothesisVerdict::satisfied: return "spr-hypotheses-satisfied";
    case HypothesisVerdict::degenerate: return "degenerate";
    case HypothesisVerdict::failed: return "failed-with-witness";
  }
  return "?";
}

OrthogonalityCheck check_orthogonality(const OrthoBasis& basis, const HypothesisOptions& options) {
  auto family = orthogonality_family(basis.size(), basis.field());
  OrthogonalityCheck out;
  out.family_size = family.size();
  if (family.size() > options.max_family) {
    // Keep 1 and every s_i; sample the product terms.
    const std::size_t head = 1 + basis.size();
    std::vector<FamilyMember> products(family.begin() + static_cast<std::ptrdiff_t>(head), family.end());
    auto rng = trial_stream(options.seed, kSubsampleStream, 0);
    std::shuffle(products.begin(), products.end(), rng);
    const std::size_t keep = options.max_family > head ? options.max_family - head : 0;
    family.resize(head);
    family.insert(family.end(), products.begin(), products.begin() + static_cast<std::ptrdiff_t>(std::min(keep, products.size())));
    out.subsampled = true;
  }

  std::vector<SampledFunction> funcs;
  funcs.reserve(family.size());
  for (const auto& m : family) funcs.push_back(materialize(basis, m));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b) pairs.emplace_back(a, b);
  std::vector<cplx> values(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs.size()); ++k) {
    const auto [a, b] = pairs[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(k)] = inner(funcs[a], funcs[b]);
  }

  out.pairs_checked = pairs.size();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double v = std::abs(values[k]);
    if (!out.witness || clearly_greater(v, out.max_violation)) {
      out.max_violation = v;
      out.witness_value = values[k];
      out.witness = std::make_pair(family[pairs[k].first], family[pairs[k].second]);
    }
  }
  out.passed = out.max_violation <= options.orthogonality_tol;
  return out;
}

MomentCheck check_moments(const OrthoBasis& basis, const HypothesisOptions& options) {
  const std::size_t m = basis.size();
  MomentCheck out;
  out.s_norm_sq.resize(m);
  out.s_norm_sq_via_l4.resize(m);
  std::vector<SampledFunction> mod_sq;
  mod_sq.reserve(m);
  out.min_s_norm_sq = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double l4 = norm_p(basis.r(j), 4.0);
    if (clearly_greater(l4, out.sup_l4) || j == 0) out.sup_l4 = l4, out.sup_l4_index = j;
    out.s_norm_sq[j] = inner(basis.s(j), basis.s(j)).real();
    out.s_norm_sq_via_l4[j] = kernels::abs_pow_sum(basis.r(j).values(), basis.measure()->weights(), 4.0) - 1.0;
    if (j == 0 || out.s_norm_sq[j] < out.min_s_norm_sq - 1e-12 * std::max(1.0, out.min_s_norm_sq))
      out.min_s_norm_sq = out.s_norm_sq[j], out.min_s_index = j;
    mod_sq.push_back(basis.r(j).modulus_squared());
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  if (m > options.full_scan_max && pairs.size() > options.sampled_pairs) {
    auto rng = trial_stream(options.seed, kSubsampleStream, 1);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(options.sampled_pairs);
    std::sort(pairs.begin(), pairs.end());
    out.subsampled = true;
  }
  if (!pairs.empty()) {
    std::vector<double> norms(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs.size()); ++k) {
      const auto [i, j] = pairs[static_cast<std::size_t>(k)];
      norms[static_cast<std::size_t>(k)] = inner(mod_sq[i], mod_sq[j]).real();
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (k == 0 || norms[k] < best - 1e-12 * std::max(1.0, best)) best = norms[k], out.min_product_pair = pairs[k];
    out.min_product_norm_sq = best;
  }

  out.delta = out.min_s_norm_sq;
  if (out.min_product_norm_sq) out.delta = std::min(out.delta, *out.min_product_norm_sq);
  out.h2_passed = std::isfinite(out.sup_l4);
  out.h3_passed = out.delta > options.delta_threshold;
  return out;
}

HypothesisReport full_report(const OrthoBasis& basis, const HypothesisOptions& options) {
  HypothesisReport r;
  r.field = basis.field();
  r.orthogonality = check_orthogonality(basis, options);
  r.moments = check_moments(basis, options);
  if (!r.orthogonality.passed)
    r.verdict = HypothesisVerdict::failed;
  else if (!r.moments.h3_passed || !r.moments.h2_passed)
    r.verdict = HypothesisVerdict::degenerate;
  else
    r.verdict = HypothesisVerdict::satisfied;
  return r;
}

EmbeddingEstimate embedding_constant(const OrthoBasis& basis, double p, std::size_t trials, std::uint64_t seed) {
  if (!(p >= 1.0)) throw InvalidArgument("embedding_constant needs p >= 1");
  const std::size_t m = basis.size();
  std::vector<CoefVec> probes;
  for (std::size_t k = 0; k < m; ++k) {
    CoefVec e(m, 0.0);
    e[k] = 1.0;
    probes.push_back(std::move(e));
  }
  probes.emplace_back(m, cplx(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
  constexpr std::size_t kMaxPairProbes = 2016;
  for (std::size_t i = 0; i < m && probes.size() < m + 1 + kMaxPairProbes; ++i)
    for (std::size_t j = i + 1; j < m && probes.size() < m + 1 + kMaxPairProbes; ++j) {
      CoefVec e(m, 0.0);
      e[i] = e[j] = std::sqrt(0.5);
      probes.push_back(std::move(e));
    }

  const std::size_t total = probes.size() + trials;
  std::vector<double> ratios(total);
  std::vector<CoefVec> random_coeffs(trials);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(total); ++t) {
    const auto k = static_cast<std::size_t>(t);
    const CoefVec* a = nullptr;
    if (k < probes.size()) {
      a = &probes[k];
    } else {
      auto rng = trial_stream(seed, kEmbeddingStream, k - probes.size());
      random_coeffs[k - probes.size()] = random_unit_coeffs(rng, m, basis.field());
      a = &random_coeffs[k - probes.size()];
    }
    const auto f = synthesize(basis, *a);
    ratios[k] = norm_p(f, p) / norm_p(f, 2.0);
  }

  EmbeddingEstimate out;
  out.p = p;
  out.trials = trials;
  out.probes = probes.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k < total; ++k)
    if (ratios[k] > ratios[best]) best = k;
  out.constant = ratios[best];
  out.argmax_coeffs = best < probes.size() ? probes[best] : random_coeffs[best - probes.size()];
  return out;
}

}  // namespace spr
