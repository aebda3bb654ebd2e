#pragma once

// Atom-wise kernels shared by every module.
//
// The default versions are OpenMP-parallel. Reductions accumulate fixed-size
// blocks of atoms and combine the block partials in index order, so a result
// is bit-identical for any thread count. The serial:: versions are plain
// left-to-right loops kept as the reference the parallel kernels are tested
// and benchmarked against.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace spr {

using cplx = std::complex<double>;

namespace kernels {

inline constexpr std::size_t kBlock = 2048;

/// Σ w_i f_i conj(g_i).
cplx inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w);

/// Σ w_i |f_i|^p for finite p ≥ 1.
double abs_pow_sum(std::span<const cplx> f, std::span<const double> w, double p);

/// max_i |f_i|.
double max_abs(std::span<const cplx> f);

/// Σ w_i |f_i − z g_i|^p (p finite) or max_i |f_i − z g_i| (p infinite).
double shifted_pow_sum(std::span<const cplx> f, std::span<const cplx> g, cplx z,
                       std::span<const double> w, double p);

/// Σ w_i ||f_i| − |g_i||^p (p finite) or the max (p infinite).
double modulus_gap_pow_sum(std::span<const cplx> f, std::span<const cplx> g,
                           std::span<const double> w, double p);

/// Σ w_i (|f_i|² − |g_i|²)².
double modulus_sq_gap_sum(std::span<const cplx> f, std::span<const cplx> g,
                          std::span<const double> w);

/// Moments of d = f − z₀g and g' = z₀g that make ‖d − εg'‖₄⁴ an explicit
/// polynomial in ε, accurate even when d is tiny compared with g.
struct QuarticMoments {
  double dd2 = 0.0;  // ∫|d|⁴
  double bb = 0.0;   // ∫|d|²|g'|²   (|β|² with β = d·conj(g'))
  double gg2 = 0.0;  // ∫|g'|⁴
  cplx db{};         // ∫|d|² β
  cplx b2{};         // ∫β²
  cplx gb{};         // ∫|g'|² β

  QuarticMoments& operator+=(const QuarticMoments& o) {
    dd2 += o.dd2, bb += o.bb, gg2 += o.gg2, db += o.db, b2 += o.b2, gb += o.gb;
    return *this;
  }
  /// ‖d − εg'‖₄⁴; nonnegative up to rounding.
  double eval(cplx eps) const {
    const double e2 = std::norm(eps);
    const cplx ec = std::conj(eps);
    return dd2 - 4.0 * (ec * db).real() + 4.0 * e2 * bb + 2.0 * (ec * ec * b2).real() -
           4.0 * e2 * (ec * gb).real() + e2 * e2 * gg2;
  }
};

QuarticMoments quartic_moments(std::span<const cplx> f, std::span<const cplx> g, cplx z0,
                               std::span<const double> w);

/// out_i = Σ_k c_k columns[k]_i.
void linear_combination(std::span<const std::span<const cplx>> columns, std::span<const cplx> coeffs,
                        std::span<cplx> out);

namespace serial {

cplx inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w);
double abs_pow_sum(std::span<const cplx> f, std::span<const double> w, double p);
double max_abs(std::span<const cplx> f);
double shifted_pow_sum(std::span<const cplx> f, std::span<const cplx> g, cplx z,
                       std::span<const double> w, double p);
double modulus_gap_pow_sum(std::span<const cplx> f, std::span<const cplx> g,
                           std::span<const double> w, double p);
double modulus_sq_gap_sum(std::span<const cplx> f, std::span<const cplx> g,
                          std::span<const double> w);
QuarticMoments quartic_moments(std::span<const cplx> f, std::span<const cplx> g, cplx z0,
                               std::span<const double> w);
void linear_combination(std::span<const std::span<const cplx>> columns, std::span<const cplx> coeffs,
                        std::span<cplx> out);

}  // namespace serial

/// |x|^p with exact small-integer fast paths.
inline double pow_abs(double x, double p) {
  const double a = x < 0 ? -x : x;
  if (p == 2.0) return a * a;
  if (p == 4.0) {
    const double s = a * a;
    return s * s;
  }
  if (p == 6.0) {
    const double s = a * a;
    return s * s * s;
  }
  if (p == 1.0) return a;
  return std::pow(a, p);
}

}  // namespace kernels
}  // namespace spr
