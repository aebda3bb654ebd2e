#include "spr/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "spr/errors.hpp"

namespace spr {
namespace {

double residual_of(const OrthoBasis& basis, const CoefVec& a, const SampledFunction& modulus) {
  return modulus_gap(synthesize(basis, a), modulus, 2.0);
}

}  // namespace

RecoveryResult recover_coefficients(const OrthoBasis& basis, const SampledFunction& modulus,
                                    const RecoveryOptions& options) {
  if (modulus.measure_ptr() != basis.measure() && !modulus.measure().same_as(*basis.measure()))
    throw InvalidArgument("modulus is sampled on a different measure than the basis");
  for (auto v : modulus.values()) {
    if (v.imag() != 0.0) throw InvalidArgument("modulus must be real-valued");
    if (v.real() < -options.negative_tol) throw InvalidArgument("modulus has negative values");
  }

  const std::size_t m = basis.size();
  const bool real = basis.field() == Field::real;
  const auto q = modulus.modulus_squared();

  RecoveryResult out;
  out.coeffs.assign(m, 0.0);
  out.diagonal_reads.resize(m);

  // (2) diagonal reads d_k = ⟨q, s_k⟩/‖s_k‖₂², clipped at 0.
  std::vector<double> s_norm_sq(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(m); ++k) {
    const auto& s = basis.s(static_cast<std::size_t>(k));
    s_norm_sq[static_cast<std::size_t>(k)] = inner(s, s).real();
    out.diagonal_reads[static_cast<std::size_t>(k)] = inner(q, s).real();
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (s_norm_sq[k] <= 1e-14)
      throw DegenerateBasis("s_" + std::to_string(k + 1) + " vanishes; |a_k|² cannot be read from |f|²");
    out.diagonal_reads[k] = std::max(0.0, out.diagonal_reads[k] / s_norm_sq[k]);
  }
  const auto& d = out.diagonal_reads;

  // (3) anchor at the largest diagonal read.
  const std::size_t n0 = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  out.anchor_index = n0;
  const double tol_sq = options.tol * options.tol;
  if (d[n0] <= tol_sq) {
    out.flags.zero_function = true;
    out.residual = norm_p(modulus, 2.0);
    out.flags.model_mismatch = out.residual > options.mismatch_rel * out.residual;
    return out;
  }
  out.flags.weak_anchor = d[n0] < 10.0 * tol_sq;

  // (4) off-diagonal reads against the anchor: p_j ≈ a_j conj(a_n0).
  auto read_pair = [&](std::size_t j, std::size_t anchor) {
    const auto prod = basis.product(j, anchor);
    const double nn = inner(prod, prod).real();
    const cplx v = inner(q, prod) / (real ? 2.0 * nn : nn);
    return real ? cplx(v.real(), 0.0) : v;
  };
  std::vector<cplx> p(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j)
    if (static_cast<std::size_t>(j) != n0) p[static_cast<std::size_t>(j)] = read_pair(static_cast<std::size_t>(j), n0);

  // (5) a_n0 = √d_n0, a_j = p_j / a_n0.
  const double a0 = std::sqrt(d[n0]);
  out.coeffs[n0] = a0;
  std::vector<std::size_t> ambiguous;
  const double floor = std::max(10.0 * tol_sq, 1e-12 * d[n0]);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == n0) continue;
    out.coeffs[j] = p[j] / a0;
    out.consistency_gap = std::max(out.consistency_gap, std::abs(d[j] - std::norm(p[j]) / d[n0]));
    if (d[j] > floor && std::abs(p[j]) < options.ambiguity_ratio * std::sqrt(d[j] * d[n0])) ambiguous.push_back(j);
  }

  // (6) uninformative reads: retry against the strongest informative secondary anchor.
  if (!ambiguous.empty()) {
    std::size_t n1 = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == n0 || std::find(ambiguous.begin(), ambiguous.end(), j) != ambiguous.end()) continue;
      if (d[j] > floor && (n1 == m || d[j] > d[n1])) n1 = j;
    }
    std::vector<std::size_t> unresolved;
    for (auto j : ambiguous) {
      const double mag = std::sqrt(d[j]);
      if (n1 != m) {
        const cplx p1 = read_pair(j, n1);
        if (std::abs(p1) >= options.ambiguity_ratio * std::sqrt(d[j] * d[n1])) {
          const cplx a_j = p1 / std::conj(out.coeffs[n1]);
          out.coeffs[j] = real ? cplx(std::copysign(mag, a_j.real()), 0.0) : a_j;
          continue;
        }
      }
      if (real) {
        out.coeffs[j] = mag;
        unresolved.push_back(j);
      }
    }
    if (!unresolved.empty()) {
      // Residual arbitrates each unresolved sign; the rejected choices are returned.
      out.flags.sign_ambiguity = true;
      for (auto j : unresolved) {
        CoefVec flipped = out.coeffs;
        flipped[j] = -flipped[j];
        const double keep = residual_of(basis, out.coeffs, modulus);
        const double flip = residual_of(basis, flipped, modulus);
        if (flip < keep) std::swap(out.coeffs, flipped);
        out.alternatives.push_back(flipped);
        out.alternative_residuals.push_back(std::max(keep, flip));
      }
    }
  }

  // (7) residual against the input modulus.
  out.residual = residual_of(basis, out.coeffs, modulus);
  out.flags.model_mismatch = out.residual > options.mismatch_rel * norm_p(modulus, 2.0);
  return out;
}

SampledFunction reconstruct(const OrthoBasis& basis, const SampledFunction& modulus, const RecoveryOptions& options) {
  return synthesize(basis, recover_coefficients(basis, modulus, options).coeffs);
}

}  // namespace spr
