#pragma once

// Orthonormal families r_1..r_M sampled on a DiscreteMeasure, their
// associated functions s_j = |r_j|² − 1, and the symbolic expansion of |f|²
// for f = Σ a_k r_k.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spr/measure.hpp"

namespace spr {

using CoefVec = std::vector<cplx>;

enum class BasisKind { lacunary_sine, lacunary_poly, rudin_2d, iid, exponential, custom };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// How a basis was built; enough to rebuild it.
struct Provenance {
  BasisKind kind = BasisKind::custom;
  int count = 0;
  int grid_n = 0;
  int base = 0;                         // lacunary-sine
  std::vector<cplx> alpha;              // lacunary-poly, after normalization
  int multiplier = 0;                   // lacunary-poly A
  double normalization_scale = 1.0;     // lacunary-poly: factor applied to the given α
  std::vector<std::int64_t> sequence;   // rudin-2d (n_ν) or exponential Λ
  std::vector<SupportPoint> support;    // iid
  bool hypotheses_enforced = true;      // iid
  /// False for families known not to admit phase retrieval (exponentials).
  bool spr_candidate = true;
};

class OrthoBasis {
 public:
  /// Validates ‖r_j‖₂ = 1 and ⟨r_j, r_k⟩ = 0 within `orthonormal_tol`.
  OrthoBasis(MeasurePtr measure, std::vector<SampledFunction> elements, Field field, Provenance provenance,
             double orthonormal_tol = 1e-10);

  const MeasurePtr& measure() const { return measure_; }
  std::size_t size() const { return elements_.size(); }
  Field field() const { return field_; }
  const Provenance& provenance() const { return provenance_; }

  const std::vector<SampledFunction>& elements() const { return elements_; }
  const SampledFunction& r(std::size_t j) const { return elements_.at(j); }
  /// s_j = |r_j|² − 1.
  const SampledFunction& s(std::size_t j) const { return s_elements_.at(j); }
  const std::vector<SampledFunction>& s_elements() const { return s_elements_; }

  /// r_i·conj(r_j) for the complex field, r_i·r_j for the real field.
  SampledFunction product(std::size_t i, std::size_t j) const;

 private:
  MeasurePtr measure_;
  std::vector<SampledFunction> elements_;
  std::vector<SampledFunction> s_elements_;
  Field field_;
  Provenance provenance_;
};

/// r_n(x) = √2 sin(2π·baseⁿ·x), n = 1..count. Requires grid_n > 4·base^count.
OrthoBasis lacunary_sine_basis(int count, int base, int grid_n, Field field = Field::real);

/// r_n(x) = P(Aⁿx) with P(x) = Σ_k α_k e^{2πikx}. α is rescaled to unit ℓ² norm.
OrthoBasis lacunary_poly_basis(std::vector<cplx> alpha, int multiplier, int count, int grid_n);

/// r_ν(x,y) = √2 sin(2πνy) e^{2πi n_ν x} on the square grid, ν = 1..count.
OrthoBasis rudin_2d_basis(std::vector<std::int64_t> sequence, int count, int grid_n);

struct IidOptions {
  bool enforce_hypotheses = true;
  double tol = 1e-12;
  std::size_t atom_cap = kDefaultAtomCap;
};

/// Coordinate functions of the product space support^count.
OrthoBasis iid_basis(std::vector<SupportPoint> support, int count, const IidOptions& options = {});

/// r_n(x) = e^{2πinx}, n ∈ Λ.
OrthoBasis exponential_basis(std::vector<std::int64_t> frequencies, int grid_n);

/// Named distributions used throughout: "ternary", "complex4", "rademacher".
std::vector<SupportPoint> support_preset(const std::string& name);

/// Σ a_k r_k; a may be shorter than the basis.
SampledFunction synthesize(const OrthoBasis& basis, const CoefVec& a);

/// Symbolic coefficients of |f|² = Σ_{i≠j} a_i conj(a_j) r_i conj(r_j) + Σ |a_k|² s_k + ‖f‖²·1.
/// For the real field the off-diagonal part is stored once per pair i < j and the
/// coefficient of r_i r_j in |f|² is 2·offdiag(i,j).
struct ModulusSquaredExpansion {
  Field field = Field::complex;
  double constant_term = 0.0;
  std::vector<double> diag;
  std::map<std::pair<std::size_t, std::size_t>, cplx> offdiag;

  /// Coefficient multiplying the stored off-diagonal value (1 complex, 2 real).
  double offdiag_factor() const { return field == Field::real ? 2.0 : 1.0; }
  /// Samples the expansion back onto the basis measure.
  SampledFunction synthesize(const OrthoBasis& basis) const;
};

ModulusSquaredExpansion expand_modulus_squared(const CoefVec& a, const OrthoBasis& basis);

/// Quadrature norms that recur in identities and reads: ‖s_k‖₂² and ‖r_i conj(r_j)‖₂².
struct BasisConstants {
  std::vector<double> s_norm_sq;
  std::vector<std::vector<double>> product_norm_sq;  // zero on the diagonal
};

BasisConstants basis_constants(const OrthoBasis& basis);

double l2_norm(const CoefVec& a);

}  // namespace spr
