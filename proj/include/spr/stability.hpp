#pragma once

// Empirical stability constants for phase retrieval on a basis span, the
// identities behind the moment-gap inequality, and the bound chain that turns
// that inequality into an L⁴ stability estimate.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spr/bases.hpp"

namespace spr {

/// f = r e^{iθ} g + h with r ≥ 0 and h ⊥ g.
struct PhaseDecomposition {
  double r = 0.0;
  double theta = 0.0;
  SampledFunction h;
};

PhaseDecomposition phase_decompose(const SampledFunction& f, const SampledFunction& g);

enum class RatioStatus {
  ok,
  violation,   ///< ‖|f|−|g|‖_p ≈ 0 while f is far from every zg
  negligible,  ///< numerator and denominator both ≈ 0: no information
};

std::string to_string(RatioStatus status);

struct RatioResult {
  RatioStatus status = RatioStatus::ok;
  double ratio = 0.0;        ///< 0 unless status is ok
  double numerator = 0.0;    ///< min_z ‖f − zg‖_p
  double denominator = 0.0;  ///< ‖|f| − |g|‖_p
};

/// min_z ‖f − zg‖_p / ‖|f| − |g|‖_p for f = Σ a_k r_k, g = Σ b_k r_k.
RatioResult spr_ratio(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b, double p);

struct Violation {
  CoefVec a, b;
  double numerator = 0.0;
  double denominator = 0.0;
  std::string source;  ///< probe family or "random" / "adversarial"
};

struct StabilityReport {
  double p = 4.0;
  double sup_ratio = 0.0;
  std::pair<CoefVec, CoefVec> argmax_pair;
  std::string argmax_source;
  std::size_t trials = 0;     ///< random pairs (Monte Carlo) or proposals (hill climbing)
  std::size_t probes = 0;     ///< structured pairs
  std::size_t evaluated = 0;  ///< pairs with status ok
  std::size_t skipped = 0;    ///< negligible pairs
  std::optional<double> gamma_fit;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  ///< first kMaxStoredViolations, in evaluation order
  std::optional<double> delta;
  std::optional<double> embedding_constant;
  /// 4C²/√δ with the empirical C: the L⁴ ratio bound implied by the proof chain.
  std::optional<double> theoretical_bound;
  std::string bound_label;
  /// Best ratio per restart (hill climbing only).
  std::vector<double> restart_best;

  static constexpr std::size_t kMaxStoredViolations = 64;

  bool spr_consistent() const { return violation_count == 0; }
};

StabilityReport monte_carlo_spr(const OrthoBasis& basis, std::size_t trials, double p, std::uint64_t seed);

/// Hill climbing from the argmax of `baseline` and from random starts.
/// Step σ: multiply one coordinate by 1 ± σ (or add ±σ near zero); σ starts at
/// 0.5 and halves after a full sweep without improvement, down to 1e-4.
StabilityReport adversarial_from(const OrthoBasis& basis, const StabilityReport& baseline, std::size_t restarts,
                                 std::size_t steps, std::uint64_t seed);

/// adversarial_from a Monte Carlo baseline with `baseline_trials` trials
/// (default: one per restart) on the same seed.
StabilityReport adversarial_spr(const OrthoBasis& basis, std::size_t restarts, std::size_t steps, double p,
                                std::uint64_t seed, std::size_t baseline_trials = 0);

struct HolderFit {
  double gamma = 0.0;        ///< fitted slope of log numerator vs log denominator
  double decades = 0.0;      ///< log10 spread of the denominators used
  std::size_t points = 0;
  std::size_t groups = 0;
  std::vector<std::pair<double, double>> samples;  ///< (denominator, numerator)
};

/// Pairs f = g + t·d for unit g, d and t log-spaced over [1e-5, 1]; slope by
/// least squares within each (g, d) group. Throws InvalidArgument when the
/// denominators span fewer than `min_decades` decades.
HolderFit holder_fit(const OrthoBasis& basis, std::size_t trials, double p, std::uint64_t seed,
                     double min_decades = 4.0);

/// Exponent θ solving 1/4 = θ/2 + (1 − θ)/q (interpolating L⁴ between L² and Lq).
double interpolation_theta(double q);

/// γ = (q − 4)/(2q − 4): Hölder exponent for fixed-modulus Fourier families.
double fixed_modulus_gamma(double q);

struct IdentityResiduals {
  // (i) ‖|f|²−|g|²‖₂² against its orthogonal expansion
  double lhs_i = 0.0, rhs_i = 0.0, residual_i = 0.0;
  // (ii) Σ_{i≠j}|a_i conj(a_j) − b_i conj(b_j)|² against ‖f‖⁴+‖g‖⁴−2|⟨f,g⟩|²−Σ(|a_k|²−|b_k|²)²
  double lhs_ii = 0.0, rhs_ii = 0.0, residual_ii = 0.0;
  // (iii) ‖|f|²−|g|²‖₂² ≥ δ[‖f‖²‖g‖²−|⟨f,g⟩|²] + (‖f‖²−‖g‖²)²
  double lhs_iii = 0.0, rhs_iii = 0.0, margin_iii = 0.0;
  bool inequality_holds = true;
  // (iv) exponential bases only
  std::optional<double> lhs_iv, rhs_iv, residual_iv;
  /// (‖f‖₂² + ‖g‖₂²)²; residuals are divided by it.
  double scale = 1.0;
};

/// Caches the quadrature constants of one basis for repeated evaluation.
class LemmaSuite {
 public:
  LemmaSuite(const OrthoBasis& basis, double delta);
  IdentityResiduals evaluate(const CoefVec& a, const CoefVec& b) const;
  double delta() const { return delta_; }

 private:
  const OrthoBasis& basis_;
  BasisConstants constants_;
  double delta_;
};

/// One-shot version; δ is taken from check_moments.
IdentityResiduals lemma_identity_suite(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b);

struct BoundCheck {
  double r = 0.0;
  double h_norm_sq = 0.0;
  double lhs_l2_sq = 0.0;  ///< ‖f − zg‖₂²
  double rhs_l2_sq = 0.0;  ///< 16C²δ⁻¹ ‖|f|−|g|‖₄²
  double lhs_l4 = 0.0;     ///< ‖f − zg‖₄
  double rhs_l4 = 0.0;     ///< 4C²δ^{−1/2} ‖|f|−|g|‖₄
  double margin_l2 = 0.0;
  double margin_l4 = 0.0;
  /// |‖f − zg‖₂² − (‖h‖₂² + (1−r)²)|
  double identity_residual = 0.0;
  double constant_used = 0.0;
  bool anomaly = false;
};

/// Normalizes to ‖f‖₂ ≤ ‖g‖₂ = 1, takes z = e^{iθ} from phase_decompose and
/// evaluates both inequalities of the L⁴ bound chain. The constant used is the
/// larger of `embedding_c` and the L⁴/L² ratios of f, g and f − zg, all lower
/// bounds for the true embedding constant. δ is capped at 1.
BoundCheck proposition_bound_check(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b, double embedding_c,
                                   double delta);

}  // namespace spr
