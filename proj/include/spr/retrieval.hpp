#pragma once

// Direct recovery of f = Σ a_k r_k from |f|, up to a global unimodular factor.
//
// |f|² expands in the orthogonal family {1, s_k, r_i conj(r_j)}, so linear
// reads of |f|² against s_k give |a_k|² and reads against r_j conj(r_n0) give
// a_j conj(a_n0). Fixing a_n0 > 0 at the largest |a_k| determines the rest.

#include <vector>

#include "spr/bases.hpp"

namespace spr {

struct RecoveryOptions {
  /// Diagonal reads at or below tol² mean the zero function.
  double tol = 1e-8;
  /// Residual above mismatch_rel·‖modulus‖₂ flags input outside the span.
  double mismatch_rel = 1e-6;
  /// An off-diagonal read below this fraction of √(d_j d_n0) is treated as
  /// uninformative and re-read against a secondary anchor.
  double ambiguity_ratio = 0.5;
  /// Modulus values below −negative_tol are rejected.
  double negative_tol = 1e-12;
};

struct RecoveryFlags {
  bool zero_function = false;
  bool weak_anchor = false;
  bool model_mismatch = false;
  bool sign_ambiguity = false;  // real field only
};

struct RecoveryResult {
  CoefVec coeffs;  ///< coeffs[anchor_index] is real and ≥ 0
  std::size_t anchor_index = 0;
  double residual = 0.0;  ///< ‖ |Σ a_k r_k| − modulus ‖₂
  /// max_j | d_j − |p_{j,n0}|²/d_{n0} |: disagreement between the two routes to |a_j|².
  double consistency_gap = 0.0;
  std::vector<double> diagonal_reads;
  RecoveryFlags flags;
  /// Other sign choices with the residual of each (real field, ambiguous reads only).
  std::vector<CoefVec> alternatives;
  std::vector<double> alternative_residuals;
};

RecoveryResult recover_coefficients(const OrthoBasis& basis, const SampledFunction& modulus,
                                    const RecoveryOptions& options = {});

/// Σ a_k r_k for the recovered, phase-normalized coefficients.
SampledFunction reconstruct(const OrthoBasis& basis, const SampledFunction& modulus,
                            const RecoveryOptions& options = {});

}  // namespace spr
