#include "spr/bases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spr/errors.hpp"

namespace spr {
namespace {

const double kSqrt2 = std::numbers::sqrt2;

// base^exp, or nullopt-like -1 on overflow past `cap`.
std::int64_t checked_pow(std::int64_t base, int exp, std::int64_t cap) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return -1;
    v *= base;
  }
  return v;
}

void require_grid(bool ok, const std::string& what, long double minimum, int grid_n) {
  if (!ok)
    throw InvalidArgument(what + ": grid_n = " + std::to_string(grid_n) + " is too coarse; need grid_n > " +
                          std::to_string(static_cast<long long>(minimum)));
}

std::vector<std::span<const cplx>> columns_of(const OrthoBasis& basis, std::size_t count) {
  std::vector<std::span<const cplx>> cols;
  cols.reserve(count);
  for (std::size_t k = 0; k < count; ++k) cols.push_back(basis.r(k).values());
  return cols;
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::lacunary_sine: return "lacunary-sine";
    case BasisKind::lacunary_poly: return "lacunary-poly";
    case BasisKind::rudin_2d: return "rudin-2d";
    case BasisKind::iid: return "iid";
    case BasisKind::exponential: return "exponential";
    case BasisKind::custom: return "custom";
  }
  return "?";
}

BasisKind basis_kind_from_string(const std::string& name) {
  for (auto k : {BasisKind::lacunary_sine, BasisKind::lacunary_poly, BasisKind::rudin_2d, BasisKind::iid,
                 BasisKind::exponential, BasisKind::custom})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown basis kind '" + name + "'");
}

OrthoBasis::OrthoBasis(MeasurePtr measure, std::vector<SampledFunction> elements, Field field,
                       Provenance provenance, double orthonormal_tol)
    : measure_(std::move(measure)), elements_(std::move(elements)), field_(field),
      provenance_(std::move(provenance)) {
  if (elements_.empty()) throw InvalidArgument("basis needs at least one element");
  const auto one = SampledFunction::constant(measure_, 1.0);
  s_elements_.reserve(elements_.size());
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const auto& r = elements_[j];
    if (r.measure_ptr() != measure_ && !r.measure().same_as(*measure_))
      throw InvalidArgument("basis element " + std::to_string(j + 1) + " lives on a different measure");
    if (field_ == Field::real && !r.is_real())
      throw InvalidArgument("real-field basis element " + std::to_string(j + 1) + " is not real-valued");
    s_elements_.push_back(r.modulus_squared() - one);
  }
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const double nn = inner(elements_[j], elements_[j]).real();
    if (std::abs(nn - 1.0) > orthonormal_tol)
      throw InvalidArgument("basis element " + std::to_string(j + 1) + " has squared norm " + std::to_string(nn));
    for (std::size_t k = j + 1; k < elements_.size(); ++k) {
      if (std::abs(inner(elements_[j], elements_[k])) > orthonormal_tol)
        throw InvalidArgument("basis elements " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                              " are not orthogonal");
    }
  }
}

SampledFunction OrthoBasis::product(std::size_t i, std::size_t j) const {
  if (field_ == Field::real) return r(i) * r(j);
  return r(i) * r(j).conjugate();
}

OrthoBasis lacunary_sine_basis(int count, int base, int grid_n, Field field) {
  if (count < 1) throw InvalidArgument("lacunary sine basis needs count >= 1");
  if (base < 2) throw InvalidArgument("lacunary sine basis needs base >= 2");
  const std::int64_t top = checked_pow(base, count, std::numeric_limits<std::int64_t>::max() / 8);
  require_grid(top > 0 && grid_n > 4 * top, "lacunary-sine", top > 0 ? 4.0L * top : 0.0L, grid_n);

  auto measure = make_interval_grid(grid_n);
  std::vector<SampledFunction> elements;
  std::int64_t freq = 1;
  for (int n = 1; n <= count; ++n) {
    freq *= base;
    elements.push_back(SampledFunction::generate(measure, [&](std::size_t a) {
      return cplx(kSqrt2 * grid_character(freq, a, grid_n).imag(), 0.0);
    }));
  }
  Provenance prov;
  prov.kind = BasisKind::lacunary_sine;
  prov.count = count;
  prov.grid_n = grid_n;
  prov.base = base;
  return OrthoBasis(measure, std::move(elements), field, std::move(prov));
}

OrthoBasis lacunary_poly_basis(std::vector<cplx> alpha, int multiplier, int count, int grid_n) {
  const auto n_terms = static_cast<std::int64_t>(alpha.size());
  if (n_terms < 1) throw InvalidArgument("lacunary poly basis needs at least one coefficient");
  if (count < 1) throw InvalidArgument("lacunary poly basis needs count >= 1");
  if (multiplier <= 2 * n_terms)
    throw InvalidArgument("lacunary poly basis needs A > 2N (A = " + std::to_string(multiplier) +
                          ", N = " + std::to_string(n_terms) + ")");
  double norm_sq = 0.0;
  for (auto c : alpha) norm_sq += std::norm(c);
  if (!(norm_sq > 0.0)) throw InvalidArgument("lacunary poly coefficients are all zero");
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto& c : alpha) c *= scale;

  // |P|² − 1 has frequencies below N, and its square below 2N: a 4N+4 grid is exact.
  {
    const int fine = static_cast<int>(4 * n_terms + 4);
    auto probe = make_interval_grid(fine);
    auto p = SampledFunction::generate(probe, [&](std::size_t a) {
      cplx v{};
      for (std::int64_t k = 1; k <= n_terms; ++k) v += alpha[static_cast<std::size_t>(k - 1)] * grid_character(k, a, fine);
      return v;
    });
    const double dev = norm_p(p.modulus_squared() - SampledFunction::constant(probe, 1.0), 2.0);
    if (dev <= 1e-8)
      throw DegenerateBasis("|P| is constant (‖|P|²−1‖₂ = " + std::to_string(dev) +
                            "); phase retrieval is impossible for this polynomial");
  }

  const std::int64_t top = checked_pow(multiplier, count, std::numeric_limits<std::int64_t>::max() / (8 * n_terms));
  require_grid(top > 0 && grid_n > 4 * n_terms * top, "lacunary-poly", top > 0 ? 4.0L * n_terms * top : 0.0L, grid_n);

  auto measure = make_interval_grid(grid_n);
  std::vector<SampledFunction> elements;
  std::int64_t power = 1;
  for (int n = 1; n <= count; ++n) {
    power *= multiplier;
    elements.push_back(SampledFunction::generate(measure, [&](std::size_t a) {
      cplx v{};
      for (std::int64_t k = 1; k <= n_terms; ++k)
        v += alpha[static_cast<std::size_t>(k - 1)] * grid_character(k * power, a, grid_n);
      return v;
    }));
  }
  Provenance prov;
  prov.kind = BasisKind::lacunary_poly;
  prov.count = count;
  prov.grid_n = grid_n;
  prov.alpha = std::move(alpha);
  prov.multiplier = multiplier;
  prov.normalization_scale = scale;
  return OrthoBasis(measure, std::move(elements), Field::complex, std::move(prov));
}

OrthoBasis rudin_2d_basis(std::vector<std::int64_t> sequence, int count, int grid_n) {
  if (count < 1) throw InvalidArgument("rudin-2d basis needs count >= 1");
  if (static_cast<int>(sequence.size()) < count)
    throw InvalidArgument("rudin-2d sequence has fewer than count terms");
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] < 1) throw InvalidArgument("rudin-2d sequence must be positive");
    if (i > 0 && sequence[i] <= sequence[i - 1])
      throw InvalidArgument("rudin-2d sequence must be strictly increasing");
  }
  sequence.resize(static_cast<std::size_t>(count));
  const std::int64_t top = sequence.back();
  const std::int64_t need = std::max<std::int64_t>(2 * top, 4 * static_cast<std::int64_t>(count));
  require_grid(grid_n > need, "rudin-2d", need, grid_n);

  auto measure = make_square_grid(grid_n);
  std::vector<SampledFunction> elements;
  for (int v = 1; v <= count; ++v) {
    const std::int64_t nx = sequence[static_cast<std::size_t>(v - 1)];
    // Factor tables along each axis.
    std::vector<double> ys(static_cast<std::size_t>(grid_n));
    std::vector<cplx> xs(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
      ys[static_cast<std::size_t>(i)] = kSqrt2 * grid_character(v, static_cast<std::size_t>(i), grid_n).imag();
      xs[static_cast<std::size_t>(i)] = grid_character(nx, static_cast<std::size_t>(i), grid_n);
    }
    elements.push_back(SampledFunction::generate(
        measure, [&](std::size_t a) { return ys[measure->iy(a)] * xs[measure->ix(a)]; }));
  }
  Provenance prov;
  prov.kind = BasisKind::rudin_2d;
  prov.count = count;
  prov.grid_n = grid_n;
  prov.sequence = std::move(sequence);
  return OrthoBasis(measure, std::move(elements), Field::complex, std::move(prov));
}

OrthoBasis iid_basis(std::vector<SupportPoint> support, int count, const IidOptions& options) {
  if (count < 1) throw InvalidArgument("iid basis needs count >= 1");
  if (support.empty()) throw InvalidArgument("iid basis needs a nonempty support");
  const bool real = std::all_of(support.begin(), support.end(), [](const SupportPoint& s) { return s.value.imag() == 0.0; });

  if (options.enforce_hypotheses) {
    cplx mean{}, second{};
    double abs_second = 0.0;
    bool nonunimodular = false;
    for (const auto& s : support) {
      mean += s.probability * s.value;
      second += s.probability * s.value * s.value;
      abs_second += s.probability * std::norm(s.value);
      if (std::abs(std::abs(s.value) - 1.0) > options.tol) nonunimodular = true;
    }
    if (std::abs(mean) > options.tol)
      throw InvalidArgument("iid basis: E r = " + std::to_string(std::abs(mean)) + " != 0");
    if (std::abs(abs_second - 1.0) > options.tol)
      throw InvalidArgument("iid basis: E|r|² = " + std::to_string(abs_second) + " != 1");
    if (!real && std::abs(second) > options.tol)
      throw InvalidArgument("iid basis: complex support needs E r² = 0, got |E r²| = " +
                            std::to_string(std::abs(second)));
    if (!nonunimodular)
      throw DegenerateBasis("iid basis: |r| = 1 almost surely (Rademacher-type support); s_j ≡ 0 and phase "
                            "retrieval fails since |r_m| ≡ |r_n|");
  }

  auto measure = make_product_space(support, count, options.atom_cap);
  std::vector<SampledFunction> elements;
  for (int j = 0; j < count; ++j) {
    elements.push_back(SampledFunction::generate(
        measure, [&](std::size_t a) { return measure->support()[measure->support_index(a, j)].value; }));
  }
  Provenance prov;
  prov.kind = BasisKind::iid;
  prov.count = count;
  prov.support = std::move(support);
  prov.hypotheses_enforced = options.enforce_hypotheses;
  return OrthoBasis(measure, std::move(elements), real ? Field::real : Field::complex, std::move(prov));
}

OrthoBasis exponential_basis(std::vector<std::int64_t> frequencies, int grid_n) {
  if (frequencies.empty()) throw InvalidArgument("exponential basis needs at least one frequency");
  auto sorted = frequencies;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("exponential basis frequencies must be distinct");
  std::int64_t max_abs = 0;
  for (auto f : frequencies) max_abs = std::max(max_abs, f < 0 ? -f : f);
  const std::int64_t need = 2 * std::max(max_abs, sorted.back() - sorted.front());
  require_grid(grid_n > need, "exponential", need, grid_n);

  auto measure = make_interval_grid(grid_n);
  std::vector<SampledFunction> elements;
  for (auto f : frequencies)
    elements.push_back(SampledFunction::generate(measure, [&](std::size_t a) { return grid_character(f, a, grid_n); }));
  Provenance prov;
  prov.kind = BasisKind::exponential;
  prov.count = static_cast<int>(frequencies.size());
  prov.grid_n = grid_n;
  prov.sequence = std::move(frequencies);
  prov.spr_candidate = false;
  return OrthoBasis(measure, std::move(elements), Field::complex, std::move(prov));
}

std::vector<SupportPoint> support_preset(const std::string& name) {
  const double a = std::sqrt(1.5);
  if (name == "ternary") return {{{-a, 0.0}, 1.0 / 3}, {{0.0, 0.0}, 1.0 / 3}, {{a, 0.0}, 1.0 / 3}};
  if (name == "complex4") {
    std::vector<SupportPoint> s{{{0.0, 0.0}, 1.0 / 3}};
    for (int k = 0; k < 3; ++k) s.push_back({std::polar(a, 2.0 * std::numbers::pi * k / 3.0), 2.0 / 9});
    return s;
  }
  if (name == "rademacher") return {{{-1.0, 0.0}, 0.5}, {{1.0, 0.0}, 0.5}};
  throw InvalidArgument("unknown support preset '" + name + "' (expected ternary|complex4|rademacher)");
}

SampledFunction synthesize(const OrthoBasis& basis, const CoefVec& a) {
  if (a.size() > basis.size())
    throw InvalidArgument("coefficient vector has " + std::to_string(a.size()) + " entries for a basis of " +
                          std::to_string(basis.size()));
  if (basis.field() == Field::real && std::any_of(a.begin(), a.end(), [](cplx c) { return c.imag() != 0.0; }))
    throw InvalidArgument("real-field basis needs real coefficients");
  std::vector<cplx> out(basis.measure()->size());
  const auto cols = columns_of(basis, a.size());
  kernels::linear_combination(cols, a, out);
  return SampledFunction(basis.measure(), std::move(out));
}

ModulusSquaredExpansion expand_modulus_squared(const CoefVec& a, const OrthoBasis& basis) {
  ModulusSquaredExpansion e;
  e.field = basis.field();
  e.diag.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    e.diag[k] = std::norm(a[k]);
    e.constant_term += e.diag[k];
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      if (e.field == Field::real && i > j) continue;
      e.offdiag[{i, j}] = a[i] * std::conj(a[j]);
    }
  }
  return e;
}

SampledFunction ModulusSquaredExpansion::synthesize(const OrthoBasis& basis) const {
  auto out = SampledFunction::constant(basis.measure(), constant_term);
  for (std::size_t k = 0; k < diag.size(); ++k) out += diag[k] * basis.s(k);
  const double factor = offdiag_factor();
  for (const auto& [ij, c] : offdiag) out += (factor * c) * basis.product(ij.first, ij.second);
  return out;
}

BasisConstants basis_constants(const OrthoBasis& basis) {
  const std::size_t m = basis.size();
  BasisConstants c;
  c.s_norm_sq.resize(m);
  c.product_norm_sq.assign(m, std::vector<double>(m, 0.0));
  std::vector<SampledFunction> mod_sq;
  mod_sq.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    c.s_norm_sq[k] = inner(basis.s(k), basis.s(k)).real();
    mod_sq.push_back(basis.r(k).modulus_squared());
  }
  // ‖r_i conj(r_j)‖₂² = ⟨|r_i|², |r_j|²⟩.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      c.product_norm_sq[i][j] = c.product_norm_sq[j][i] = inner(mod_sq[i], mod_sq[j]).real();
  return c;
}

double l2_norm(const CoefVec& a) {
  double s = 0.0;
  for (auto c : a) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace spr
