#include "spr/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "spr/errors.hpp"
#include "spr/hypotheses.hpp"
#include "spr/random.hpp"

namespace spr {
namespace {

constexpr std::uint64_t kMonteCarloStream = 0x4d43;
constexpr std::uint64_t kAdversarialStream = 0x4144;
constexpr std::uint64_t kHolderStream = 0x484f;
constexpr std::size_t kMaxPairProbes = 2016;
constexpr double kSigmaStart = 0.5;
constexpr double kSigmaFloor = 1e-4;

struct Probe {
  CoefVec a, b;
  const char* source;
};

CoefVec unit(std::size_t m, std::size_t k) {
  CoefVec e(m, 0.0);
  e[k] = 1.0;
  return e;
}

CoefVec conj_of(CoefVec a) {
  for (auto& c : a) c = std::conj(c);
  return a;
}

void normalize(CoefVec& a) {
  const double n = l2_norm(a);
  if (n > 0)
    for (auto& c : a) c /= n;
}

std::vector<Probe> structured_probes(std::size_t m, Field field) {
  std::vector<Probe> out;
  const double h = std::sqrt(0.5);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < m && pairs < kMaxPairProbes; ++i)
    for (std::size_t j = i + 1; j < m && pairs < kMaxPairProbes; ++j, ++pairs) {
      out.push_back({unit(m, i), unit(m, j), "disjoint"});
      CoefVec plus(m, 0.0), minus(m, 0.0);
      plus[i] = minus[i] = h;
      plus[j] = h;
      minus[j] = -h;
      out.push_back({plus, minus, "sign-flip"});
      if (field == Field::complex) {
        CoefVec c(m, 0.0);
        c[i] = h;
        c[j] = cplx(0.0, h);
        out.push_back({c, conj_of(c), "conjugate"});
      }
    }
  const CoefVec flat(m, cplx(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
  if (field == Field::complex && m >= 2) {
    CoefVec c = flat;
    for (std::size_t k = 1; k < m; k += 2) c[k] *= cplx(0.0, 1.0);
    out.push_back({c, conj_of(c), "conjugate"});
  }
  for (double eps : {1e-2, 1e-4, 1e-6})
    for (std::size_t k = 0; k < m; ++k) {
      CoefVec a = flat;
      a[k] += eps;
      out.push_back({a, flat, "nearly-aligned"});
    }
  if (m >= 2) {
    CoefVec a(m, 0.0), b(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) (k < m / 2 ? a : b)[k] = 1.0;
    normalize(a);
    normalize(b);
    out.push_back({a, b, "disjoint-halves"});
  }
  return out;
}

// Ties keep the earlier pair, so reductions do not depend on evaluation order.
bool improves(double v, double best) { return v > best + 1e-12 * std::max(1.0, std::abs(best)); }

void record(StabilityReport& rep, const RatioResult& r, const CoefVec& a, const CoefVec& b, const std::string& src) {
  switch (r.status) {
    case RatioStatus::negligible: ++rep.skipped; return;
    case RatioStatus::violation:
      ++rep.violation_count;
      if (rep.violations.size() < StabilityReport::kMaxStoredViolations)
        rep.violations.push_back({a, b, r.numerator, r.denominator, src});
      return;
    case RatioStatus::ok:
      ++rep.evaluated;
      if (rep.evaluated == 1 || improves(r.ratio, rep.sup_ratio)) {
        rep.sup_ratio = r.ratio;
        rep.argmax_pair = {a, b};
        rep.argmax_source = src;
      }
      return;
  }
}

// Real coordinates of the pair (a, b): real parts, then imaginary parts for the complex field.
std::vector<double> pack(const CoefVec& a, const CoefVec& b, Field field) {
  std::vector<double> x;
  for (const CoefVec* v : {&a, &b}) {
    for (auto c : *v) x.push_back(c.real());
    if (field == Field::complex)
      for (auto c : *v) x.push_back(c.imag());
  }
  return x;
}

std::pair<CoefVec, CoefVec> unpack(const std::vector<double>& x, std::size_t m, Field field) {
  const std::size_t stride = field == Field::complex ? 2 * m : m;
  auto one = [&](std::size_t off) {
    CoefVec v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = {x[off + k], field == Field::complex ? x[off + m + k] : 0.0};
    return v;
  };
  return {one(0), one(stride)};
}

struct ClimbResult {
  double best = 0.0;
  bool has_best = false;
  CoefVec a, b;
  std::vector<std::pair<RatioResult, std::pair<CoefVec, CoefVec>>> violations;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
};

ClimbResult climb(const OrthoBasis& basis, const CoefVec& a0, const CoefVec& b0, std::size_t steps, double p) {
  const std::size_t m = basis.size();
  const Field field = basis.field();
  ClimbResult out;
  auto x = pack(a0, b0, field);
  auto eval = [&](const std::vector<double>& y) {
    auto [a, b] = unpack(y, m, field);
    auto r = spr_ratio(basis, a, b, p);
    if (r.status == RatioStatus::ok) ++out.evaluated;
    if (r.status == RatioStatus::negligible) ++out.skipped;
    if (r.status == RatioStatus::violation) out.violations.push_back({r, {std::move(a), std::move(b)}});
    return r;
  };

  auto start = eval(x);
  if (start.status == RatioStatus::violation) return out;
  double current = start.status == RatioStatus::ok ? start.ratio : 0.0;
  out.best = current;
  out.has_best = start.status == RatioStatus::ok;
  std::tie(out.a, out.b) = unpack(x, m, field);

  double sigma = kSigmaStart;
  bool improved_this_sweep = false;
  const std::size_t dim = x.size();
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t c = s % dim;
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (double sign : {1.0, -1.0}) {
      auto y = x;
      if (std::abs(x[c]) < 1e-3 * scale)
        y[c] = x[c] + sign * sigma * scale;
      else
        y[c] = x[c] * (1.0 + sign * sigma);
      const auto r = eval(y);
      if (r.status == RatioStatus::violation) return out;
      if (r.status == RatioStatus::ok && improves(r.ratio, current)) {
        x = std::move(y);
        current = r.ratio;
        improved_this_sweep = true;
        if (!out.has_best || improves(current, out.best)) {
          out.best = current;
          out.has_best = true;
          std::tie(out.a, out.b) = unpack(x, m, field);
        }
        break;
      }
    }
    if (c + 1 == dim) {
      if (!improved_this_sweep) sigma = std::max(sigma / 2.0, kSigmaFloor);
      improved_this_sweep = false;
    }
  }
  // Report the climbed pair with ‖b‖₂ = 1 (the ratio is invariant under joint scaling).
  const double nb = l2_norm(out.b);
  if (nb > 0)
    for (auto* v : {&out.a, &out.b})
      for (auto& c : *v) c /= nb;
  return out;
}

void attach_bound(StabilityReport& rep, const OrthoBasis& basis, std::uint64_t seed) {
  if (rep.p != 4.0) return;
  const auto moments = check_moments(basis);
  rep.delta = moments.delta;
  if (!(moments.delta > HypothesisOptions{}.delta_threshold) || !basis.provenance().spr_candidate) return;
  const double c = embedding_constant(basis, 4.0, 256, seed).constant;
  rep.embedding_constant = c;
  rep.theoretical_bound = 4.0 * c * c / std::sqrt(std::min(moments.delta, 1.0));
  rep.bound_label = "empirical-C bound";
}

}  // namespace

PhaseDecomposition phase_decompose(const SampledFunction& f, const SampledFunction& g) {
  require_same_measure(f, g);
  const double gg = inner(g, g).real();
  if (!(gg > 0.0)) throw InvalidArgument("phase_decompose needs g != 0");
  const cplx c = inner(f, g) / gg;
  PhaseDecomposition out{std::abs(c), 0.0, f - c * g};
  if (out.r > 0) {
    out.theta = std::arg(c);
    if (out.theta < 0) out.theta += 2.0 * std::numbers::pi;
  }
  return out;
}

std::string to_string(RatioStatus status) {
  switch (status) {
    case RatioStatus::ok: return "ok";
    case RatioStatus::violation: return "violation";
    case RatioStatus::negligible: return "negligible";
  }
  return "?";
}

RatioResult spr_ratio(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b, double p) {
  const auto f = synthesize(basis, a);
  const auto g = synthesize(basis, b);
  RatioResult r;
  const double scale = norm_p(f, p) + norm_p(g, p);
  if (scale == 0.0) {
    r.status = RatioStatus::negligible;
    return r;
  }
  r.denominator = modulus_gap(f, g, p);
  r.numerator = min_phase_dist(f, g, p, basis.field()).distance;
  if (r.denominator <= 1e-12 * scale) {
    r.status = r.numerator > 1e-8 * scale ? RatioStatus::violation : RatioStatus::negligible;
    return r;
  }
  r.ratio = r.numerator / r.denominator;
  return r;
}

StabilityReport monte_carlo_spr(const OrthoBasis& basis, std::size_t trials, double p, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("monte_carlo_spr needs trials >= 1");
  const std::size_t m = basis.size();
  const auto probes = structured_probes(m, basis.field());
  const std::size_t total = probes.size() + trials;

  std::vector<RatioResult> results(total);
  std::vector<std::pair<CoefVec, CoefVec>> drawn(trials);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(total); ++t) {
    const auto k = static_cast<std::size_t>(t);
    if (k < probes.size()) {
      results[k] = spr_ratio(basis, probes[k].a, probes[k].b, p);
    } else {
      auto rng = trial_stream(seed, kMonteCarloStream, k - probes.size());
      auto a = random_unit_coeffs(rng, m, basis.field());
      auto b = random_unit_coeffs(rng, m, basis.field());
      results[k] = spr_ratio(basis, a, b, p);
      drawn[k - probes.size()] = {std::move(a), std::move(b)};
    }
  }

  StabilityReport rep;
  rep.p = p;
  rep.trials = trials;
  rep.probes = probes.size();
  for (std::size_t k = 0; k < total; ++k) {
    if (k < probes.size())
      record(rep, results[k], probes[k].a, probes[k].b, probes[k].source);
    else
      record(rep, results[k], drawn[k - probes.size()].first, drawn[k - probes.size()].second, "random");
  }
  attach_bound(rep, basis, seed);
  return rep;
}

StabilityReport adversarial_from(const OrthoBasis& basis, const StabilityReport& baseline, std::size_t restarts,
                                 std::size_t steps, std::uint64_t seed) {
  if (restarts < 1 || steps < 1) throw InvalidArgument("adversarial search needs restarts, steps >= 1");
  const std::size_t m = basis.size();
  const double p = baseline.p;

  std::vector<std::pair<CoefVec, CoefVec>> starts(restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    if (r == 0 && !baseline.argmax_pair.first.empty()) {
      starts[r] = baseline.argmax_pair;
      continue;
    }
    auto rng = trial_stream(seed, kAdversarialStream, r);
    auto b = random_unit_coeffs(rng, m, basis.field());
    auto d = random_unit_coeffs(rng, m, basis.field());
    // Alternate far-apart starts with nearly aligned ones.
    const double t = r % 2 == 1 ? std::pow(10.0, -3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng)) : 1.0;
    CoefVec a(m);
    for (std::size_t k = 0; k < m; ++k) a[k] = r % 2 == 1 ? b[k] + t * d[k] : d[k];
    starts[r] = {std::move(a), std::move(b)};
  }

  std::vector<ClimbResult> climbs(restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(restarts); ++r) {
    const auto& [a, b] = starts[static_cast<std::size_t>(r)];
    climbs[static_cast<std::size_t>(r)] = climb(basis, a, b, steps, p);
  }

  StabilityReport rep = baseline;
  rep.trials = baseline.trials + restarts * steps;
  rep.restart_best.clear();
  for (auto& c : climbs) {
    rep.restart_best.push_back(c.best);
    rep.skipped += c.skipped;
    rep.evaluated += c.evaluated;
    for (auto& [res, pair] : c.violations) {
      ++rep.violation_count;
      if (rep.violations.size() < StabilityReport::kMaxStoredViolations)
        rep.violations.push_back({pair.first, pair.second, res.numerator, res.denominator, "adversarial"});
    }
    if (c.has_best && improves(c.best, rep.sup_ratio)) {
      rep.sup_ratio = c.best;
      rep.argmax_pair = {c.a, c.b};
      rep.argmax_source = "adversarial";
    }
  }
  return rep;
}

StabilityReport adversarial_spr(const OrthoBasis& basis, std::size_t restarts, std::size_t steps, double p,
                                std::uint64_t seed, std::size_t baseline_trials) {
  if (restarts < 1 || steps < 1) throw InvalidArgument("adversarial search needs restarts, steps >= 1");
  const auto baseline = monte_carlo_spr(basis, baseline_trials == 0 ? restarts : baseline_trials, p, seed);
  return adversarial_from(basis, baseline, restarts, steps, seed);
}

HolderFit holder_fit(const OrthoBasis& basis, std::size_t trials, double p, std::uint64_t seed, double min_decades) {
  if (trials < 10) throw InvalidArgument("holder_fit needs trials >= 10");
  const std::size_t m = basis.size();
  const std::size_t groups = std::max<std::size_t>(1, trials / 10);
  const std::size_t per = trials / groups;

  std::vector<std::vector<std::pair<double, double>>> data(groups);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(groups); ++gi) {
    auto rng = trial_stream(seed, kHolderStream, static_cast<std::size_t>(gi));
    const auto b = random_unit_coeffs(rng, m, basis.field());
    const auto d = random_unit_coeffs(rng, m, basis.field());
    for (std::size_t k = 0; k < per; ++k) {
      const double t = std::pow(10.0, -5.0 + 5.0 * static_cast<double>(k) / static_cast<double>(per - 1));
      CoefVec a(m);
      for (std::size_t j = 0; j < m; ++j) a[j] = b[j] + t * d[j];
      const auto r = spr_ratio(basis, a, b, p);
      if (r.status == RatioStatus::ok && r.numerator > 0.0)
        data[static_cast<std::size_t>(gi)].emplace_back(r.denominator, r.numerator);
    }
  }

  HolderFit fit;
  double lo = kInfinity, hi = 0.0, sxy = 0.0, sxx = 0.0;
  for (const auto& group : data) {
    if (group.size() < 2) continue;
    ++fit.groups;
    double mx = 0.0, my = 0.0;
    for (auto [den, num] : group) mx += std::log(den), my += std::log(num);
    mx /= static_cast<double>(group.size());
    my /= static_cast<double>(group.size());
    for (auto [den, num] : group) {
      const double x = std::log(den) - mx;
      sxy += x * (std::log(num) - my);
      sxx += x * x;
      lo = std::min(lo, den);
      hi = std::max(hi, den);
      fit.samples.emplace_back(den, num);
      ++fit.points;
    }
  }
  fit.decades = fit.points > 0 ? std::log10(hi / lo) : 0.0;
  if (fit.points < 2 || fit.decades < min_decades || sxx <= 0.0)
    throw InvalidArgument("holder_fit: denominators span " + std::to_string(fit.decades) + " decades, need " +
                          std::to_string(min_decades));
  fit.gamma = sxy / sxx;
  return fit;
}

double interpolation_theta(double q) {
  if (!(q > 4.0)) throw InvalidArgument("interpolation exponent needs q > 4");
  // 1/4 = θ/2 + (1 − θ)/q  ⇔  θ (1/2 − 1/q) = 1/4 − 1/q
  return (0.25 - 1.0 / q) / (0.5 - 1.0 / q);
}

double fixed_modulus_gamma(double q) {
  if (!(q > 4.0)) throw InvalidArgument("fixed-modulus exponent needs q > 4");
  return (q - 4.0) / (2.0 * q - 4.0);
}

LemmaSuite::LemmaSuite(const OrthoBasis& basis, double delta)
    : basis_(basis), constants_(basis_constants(basis)), delta_(delta) {}

IdentityResiduals LemmaSuite::evaluate(const CoefVec& a_in, const CoefVec& b_in) const {
  const std::size_t m = basis_.size();
  CoefVec a = a_in, b = b_in;
  a.resize(m, 0.0);
  b.resize(m, 0.0);
  const auto f = synthesize(basis_, a);
  const auto g = synthesize(basis_, b);
  const bool real = basis_.field() == Field::real;

  const double ff = inner(f, f).real();
  const double gg = inner(g, g).real();
  const double fg2 = std::norm(inner(f, g));
  const double gap_sq = kernels::modulus_sq_gap_sum(f.values(), g.values(), basis_.measure()->weights());

  double ca = 0.0, cb = 0.0, diag = 0.0, diag_s = 0.0, off = 0.0, off_w = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dk = std::norm(a[k]) - std::norm(b[k]);
    ca += std::norm(a[k]);
    cb += std::norm(b[k]);
    diag += dk * dk;
    diag_s += dk * dk * constants_.s_norm_sq[k];
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const cplx t = real ? a[i] * a[j] - b[i] * b[j] : a[i] * std::conj(a[j]) - b[i] * std::conj(b[j]);
      off += std::norm(t);
      off_w += std::norm(t) * constants_.product_norm_sq[i][j];
    }
  // Real field: r_i r_j appears twice in |f|², so its squared coefficient carries a factor 4 per i<j pair.
  if (real) off_w *= 2.0;

  IdentityResiduals out;
  out.scale = (ff + gg) * (ff + gg);
  if (!(out.scale > 0.0)) out.scale = 1.0;

  out.lhs_i = gap_sq;
  out.rhs_i = diag_s + (ca - cb) * (ca - cb) + off_w;
  out.residual_i = std::abs(out.lhs_i - out.rhs_i) / out.scale;

  out.lhs_ii = off;
  out.rhs_ii = ff * ff + gg * gg - 2.0 * fg2 - diag;
  out.residual_ii = std::abs(out.lhs_ii - out.rhs_ii) / out.scale;

  out.lhs_iii = gap_sq;
  out.rhs_iii = delta_ * (ff * gg - fg2) + (ff - gg) * (ff - gg);
  out.margin_iii = out.lhs_iii - out.rhs_iii;
  out.inequality_holds = out.margin_iii >= -1e-9 * out.scale;

  if (basis_.provenance().kind == BasisKind::exponential) {
    out.lhs_iv = (ff - gg) * (ff - gg) + (ff * ff + gg * gg - 2.0 * fg2);
    out.rhs_iv = gap_sq + diag;
    out.residual_iv = std::abs(*out.lhs_iv - *out.rhs_iv) / out.scale;
  }
  return out;
}

IdentityResiduals lemma_identity_suite(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b) {
  return LemmaSuite(basis, check_moments(basis).delta).evaluate(a, b);
}

BoundCheck proposition_bound_check(const OrthoBasis& basis, const CoefVec& a, const CoefVec& b, double embedding_c,
                                   double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("proposition_bound_check needs delta > 0");
  auto f = synthesize(basis, a);
  auto g = synthesize(basis, b);
  double nf = norm_p(f, 2.0), ng = norm_p(g, 2.0);
  if (nf > ng) std::swap(f, g), std::swap(nf, ng);
  BoundCheck out;
  if (ng == 0.0) {
    out.constant_used = embedding_c;
    return out;
  }
  f *= 1.0 / ng;
  g *= 1.0 / ng;

  const auto dec = phase_decompose(f, g);
  const cplx z = std::polar(1.0, dec.theta);
  const auto diff = f - z * g;
  out.r = dec.r;
  out.h_norm_sq = inner(dec.h, dec.h).real();
  out.lhs_l2_sq = inner(diff, diff).real();
  out.lhs_l4 = norm_p(diff, 4.0);
  out.identity_residual = std::abs(out.lhs_l2_sq - (out.h_norm_sq + (1.0 - out.r) * (1.0 - out.r)));

  double c = embedding_c;
  auto widen = [&](const SampledFunction& u) {
    const double n2 = norm_p(u, 2.0);
    if (n2 > 1e-12) c = std::max(c, norm_p(u, 4.0) / n2);
  };
  widen(f);
  widen(g);
  widen(diff);
  out.constant_used = c;

  const double d = std::min(delta, 1.0);
  const double gap4 = modulus_gap(f, g, 4.0);
  out.rhs_l2_sq = 16.0 * c * c / d * gap4 * gap4;
  out.rhs_l4 = 4.0 * c * c / std::sqrt(d) * gap4;
  out.margin_l2 = out.rhs_l2_sq - out.lhs_l2_sq;
  out.margin_l4 = out.rhs_l4 - out.lhs_l4;
  out.anomaly = out.margin_l2 < -1e-12 || out.margin_l4 < -1e-12;
  return out;
}

}  // namespace spr
