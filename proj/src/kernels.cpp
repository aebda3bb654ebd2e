#include "spr/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

namespace spr::kernels {
namespace {

// Deterministic blocked reduction: block partials are computed in parallel and
// summed serially in block order.
template <class T, class Term>
T blocked_sum(std::size_t n, Term term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  if (blocks <= 1) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += term(i);
    return acc;
  }
  std::vector<T> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

template <class Term>
double blocked_max(std::size_t n, Term term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, term(i));
    partial[static_cast<std::size_t>(b)] = m;
  }
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

QuarticMoments quartic_term(cplx f, cplx g, cplx z0, double w) {
  const cplx d = f - z0 * g;
  const cplx gp = z0 * g;
  const double a = std::norm(d);
  const double c = std::norm(gp);
  const cplx beta = d * std::conj(gp);
  QuarticMoments m;
  m.dd2 = a * a * w;
  m.bb = a * c * w;
  m.gg2 = c * c * w;
  m.db = a * beta * w;
  m.b2 = beta * beta * w;
  m.gb = c * beta * w;
  return m;
}

}  // namespace

QuarticMoments quartic_moments(std::span<const cplx> f, std::span<const cplx> g, cplx z0,
                               std::span<const double> w) {
  assert(f.size() == g.size() && f.size() == w.size());
  return blocked_sum<QuarticMoments>(f.size(), [&](std::size_t i) { return quartic_term(f[i], g[i], z0, w[i]); });
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w) {
  assert(f.size() == g.size() && f.size() == w.size());
  return blocked_sum<cplx>(f.size(), [&](std::size_t i) { return f[i] * std::conj(g[i]) * w[i]; });
}

double abs_pow_sum(std::span<const cplx> f, std::span<const double> w, double p) {
  assert(f.size() == w.size());
  if (p == 2.0) return blocked_sum<double>(f.size(), [&](std::size_t i) { return std::norm(f[i]) * w[i]; });
  return blocked_sum<double>(f.size(), [&](std::size_t i) { return pow_abs(std::abs(f[i]), p) * w[i]; });
}

double max_abs(std::span<const cplx> f) {
  return blocked_max(f.size(), [&](std::size_t i) { return std::abs(f[i]); });
}

double shifted_pow_sum(std::span<const cplx> f, std::span<const cplx> g, cplx z, std::span<const double> w,
                       double p) {
  assert(f.size() == g.size() && f.size() == w.size());
  if (std::isinf(p)) return blocked_max(f.size(), [&](std::size_t i) { return std::abs(f[i] - z * g[i]); });
  if (p == 2.0)
    return blocked_sum<double>(f.size(), [&](std::size_t i) { return std::norm(f[i] - z * g[i]) * w[i]; });
  if (p == 4.0)
    return blocked_sum<double>(f.size(), [&](std::size_t i) {
      const double s = std::norm(f[i] - z * g[i]);
      return s * s * w[i];
    });
  return blocked_sum<double>(f.size(),
                             [&](std::size_t i) { return pow_abs(std::abs(f[i] - z * g[i]), p) * w[i]; });
}

double modulus_gap_pow_sum(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w,
                           double p) {
  assert(f.size() == g.size() && f.size() == w.size());
  if (std::isinf(p))
    return blocked_max(f.size(), [&](std::size_t i) { return std::abs(std::abs(f[i]) - std::abs(g[i])); });
  return blocked_sum<double>(
      f.size(), [&](std::size_t i) { return pow_abs(std::abs(f[i]) - std::abs(g[i]), p) * w[i]; });
}

double modulus_sq_gap_sum(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w) {
  assert(f.size() == g.size() && f.size() == w.size());
  return blocked_sum<double>(f.size(), [&](std::size_t i) {
    const double d = std::norm(f[i]) - std::norm(g[i]);
    return d * d * w[i];
  });
}

void linear_combination(std::span<const std::span<const cplx>> columns, std::span<const cplx> coeffs,
                        std::span<cplx> out) {
  assert(columns.size() == coeffs.size());
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n > kBlock)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    cplx acc{};
    for (std::size_t k = 0; k < columns.size(); ++k) acc += coeffs[k] * columns[k][static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

namespace serial {

cplx inner(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w) {
  cplx acc{};
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]) * w[i];
  return acc;
}

double abs_pow_sum(std::span<const cplx> f, std::span<const double> w, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += pow_abs(std::abs(f[i]), p) * w[i];
  return acc;
}

double max_abs(std::span<const cplx> f) {
  double m = 0.0;
  for (const cplx& v : f) m = std::max(m, std::abs(v));
  return m;
}

double shifted_pow_sum(std::span<const cplx> f, std::span<const cplx> g, cplx z, std::span<const double> w,
                       double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - z * g[i]));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += pow_abs(std::abs(f[i] - z * g[i]), p) * w[i];
  return acc;
}

double modulus_gap_pow_sum(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w,
                           double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(std::abs(f[i]) - std::abs(g[i])));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += pow_abs(std::abs(f[i]) - std::abs(g[i]), p) * w[i];
  return acc;
}

double modulus_sq_gap_sum(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::norm(f[i]) - std::norm(g[i]);
    acc += d * d * w[i];
  }
  return acc;
}

QuarticMoments quartic_moments(std::span<const cplx> f, std::span<const cplx> g, cplx z0,
                               std::span<const double> w) {
  QuarticMoments acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc += quartic_term(f[i], g[i], z0, w[i]);
  return acc;
}

void linear_combination(std::span<const std::span<const cplx>> columns, std::span<const cplx> coeffs,
                        std::span<cplx> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    cplx acc{};
    for (std::size_t k = 0; k < columns.size(); ++k) acc += coeffs[k] * columns[k][i];
    out[i] = acc;
  }
}

}  // namespace serial
}  // namespace spr::kernels
