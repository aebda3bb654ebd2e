#pragma once

// Checks of the orthogonality and moment hypotheses on a finite basis, the
// moment gap δ, and empirical Lᵖ/L² embedding constants on its span.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "spr/bases.hpp"

namespace spr {

struct HypothesisOptions {
  double orthogonality_tol = 1e-8;
  double delta_threshold = 1e-6;
  /// Largest basis size for which every (i, j) pair enters the δ scan.
  std::size_t full_scan_max = 64;
  /// Pairs sampled beyond full_scan_max.
  std::size_t sampled_pairs = 4096;
  /// Largest orthogonality family materialized in full.
  std::size_t max_family = 600;
  std::uint64_t seed = 0;
};

/// A member of the family {1, s_i, r_j conj(r_k)} (j ≠ k; j < k for the real field).
struct FamilyMember {
  enum class Term { one, s, product };
  Term term = Term::one;
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;

  /// 1-based display label, e.g. "s1", "r2*conj(r1)", "r1*r2".
  std::string label(Field field) const;
  bool operator==(const FamilyMember&) const = default;
};

struct OrthogonalityCheck {
  double max_violation = 0.0;
  std::optional<std::pair<FamilyMember, FamilyMember>> witness;
  cplx witness_value{};
  std::size_t family_size = 0;
  std::size_t pairs_checked = 0;
  bool subsampled = false;
  bool passed = true;
};

struct MomentCheck {
  double sup_l4 = 0.0;
  std::size_t sup_l4_index = 0;
  double delta = 0.0;
  double min_s_norm_sq = 0.0;
  std::size_t min_s_index = 0;
  /// Absent for single-element bases.
  std::optional<double> min_product_norm_sq;
  std::pair<std::size_t, std::size_t> min_product_pair{0, 0};
  std::vector<double> s_norm_sq;         // direct quadrature of ‖s_j‖₂²
  std::vector<double> s_norm_sq_via_l4;  // ‖r_j‖₄⁴ − 1
  bool subsampled = false;
  bool h2_passed = true;
  bool h3_passed = true;
};

enum class HypothesisVerdict { satisfied, degenerate, failed };

std::string to_string(HypothesisVerdict verdict);

struct HypothesisReport {
  Field field = Field::complex;
  OrthogonalityCheck orthogonality;
  MomentCheck moments;
  HypothesisVerdict verdict = HypothesisVerdict::satisfied;

  double h1_max_violation() const { return orthogonality.max_violation; }
  double h2_sup_l4() const { return moments.sup_l4; }
  double h3_delta() const { return moments.delta; }
};

OrthogonalityCheck check_orthogonality(const OrthoBasis& basis, const HypothesisOptions& options = {});
MomentCheck check_moments(const OrthoBasis& basis, const HypothesisOptions& options = {});
HypothesisReport full_report(const OrthoBasis& basis, const HypothesisOptions& options = {});

/// Empirical sup of ‖f‖_p/‖f‖₂ over the span: a lower bound for the embedding constant.
struct EmbeddingEstimate {
  double p = 4.0;
  double constant = 0.0;
  std::size_t trials = 0;
  std::size_t probes = 0;
  CoefVec argmax_coeffs;
};

/// Deterministic probes (single elements, the flat vector, normalized pairs)
/// plus `trials` random unit vectors drawn from (seed, trial index).
EmbeddingEstimate embedding_constant(const OrthoBasis& basis, double p, std::size_t trials, std::uint64_t seed);

}  // namespace spr
