#include "spr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <type_traits>

#include "spr/errors.hpp"
#include "spr/hypotheses.hpp"
#include "spr/random.hpp"
#include "spr/report.hpp"
#include "spr/retrieval.hpp"
#include "spr/sidon.hpp"
#include "spr/stability.hpp"

namespace spr {
namespace {

constexpr std::uint64_t kIdentityStream = 0x4944;
constexpr std::uint64_t kExampleStream = 0x4558;

// Typed, whitelisted access to a params object.
class Params {
 public:
  Params(const Json& j, std::vector<std::string> allowed, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidArgument(where_ + ": params must be a JSON object");
    for (const auto& [key, value] : j_.items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw InvalidArgument(where_ + ": unknown parameter '" + key + "'");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& raw(const std::string& key) const { return j_.at(key); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? as<T>(key) : fallback;
  }

  template <class T>
  T require(const std::string& key) const {
    if (!has(key)) throw InvalidArgument(where_ + ": missing parameter '" + key + "'");
    return as<T>(key);
  }

  int positive(const std::string& key, std::optional<int> fallback = std::nullopt) const {
    const int v = fallback ? get<int>(key, *fallback) : require<int>(key);
    if (v < 1) throw InvalidArgument(where_ + ": parameter '" + key + "' must be >= 1");
    return v;
  }

 private:
  template <class T>
  T as(const std::string& key) const {
    const Json& v = j_.at(key);
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer())
        throw InvalidArgument(where_ + ": parameter '" + key + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<std::int64_t>() < 0 && !v.is_number_unsigned())
          throw InvalidArgument(where_ + ": parameter '" + key + "' must be nonnegative");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(where_ + ": parameter '" + key + "' has the wrong type");
    }
  }

  const Json& j_;
  std::string where_;
};

CoefVec unit_vector(std::size_t m, std::size_t k) {
  CoefVec e(m, 0.0);
  e.at(k) = 1.0;
  return e;
}

const std::vector<std::string> kBasisKeys = {"kind", "m", "base", "grid", "field", "alpha",
                                             "multiplier", "sequence", "sequence_file", "support",
                                             "enforce_hypotheses"};

int next_pow2_above(long double threshold) {
  long double n = 2;
  while (n <= threshold) n *= 2;
  if (n > static_cast<long double>(1 << 30)) throw ResourceLimit("required grid exceeds 2^30 points");
  return static_cast<int>(n);
}

std::vector<std::int64_t> resolve_sequence(const Params& p, int count) {
  if (p.has("sequence")) {
    auto seq = p.require<std::vector<std::int64_t>>("sequence");
    if (static_cast<int>(seq.size()) < count)
      throw InvalidArgument("sequence has " + std::to_string(seq.size()) + " terms, need m = " + std::to_string(count));
    seq.resize(static_cast<std::size_t>(count));
    return seq;
  }
  if (p.has("sequence_file")) {
    auto seq = bh_sequence_from_json(read_json_file(p.require<std::string>("sequence_file"))).terms;
    if (static_cast<int>(seq.size()) < count)
      throw InvalidArgument("sequence file has " + std::to_string(seq.size()) + " terms, need m = " +
                            std::to_string(count));
    seq.resize(static_cast<std::size_t>(count));
    return seq;
  }
  return sidon::greedy_bh(2, count).terms;
}

std::vector<SupportPoint> resolve_support(const Params& p) {
  const Json& s = p.raw("support");
  if (s.is_string()) return support_preset(s.get<std::string>());
  std::vector<SupportPoint> out;
  if (!s.is_array()) throw InvalidArgument("support must be a preset name or [[re, im, prob], ...]");
  for (const auto& row : s) {
    if (!row.is_array() || row.size() != 3) throw InvalidArgument("support rows must be [re, im, prob]");
    out.push_back({{row[0].get<double>(), row[1].get<double>()}, row[2].get<double>()});
  }
  return out;
}

long double grid_threshold(const Params& p, BasisKind kind, int m) {
  switch (kind) {
    case BasisKind::lacunary_sine: return 4.0L * std::pow(static_cast<long double>(p.get<int>("base", 4)), m);
    case BasisKind::lacunary_poly:
      return 4.0L * static_cast<long double>(p.require<Json>("alpha").size()) *
             std::pow(static_cast<long double>(p.require<int>("multiplier")), m);
    case BasisKind::rudin_2d: {
      const auto seq = resolve_sequence(p, m);
      return std::max(2.0L * static_cast<long double>(seq.back()), 4.0L * m);
    }
    case BasisKind::exponential: {
      const auto seq = resolve_sequence(p, m);
      std::int64_t top = 0;
      for (auto f : seq) top = std::max(top, std::abs(f));
      const auto [lo, hi] = std::minmax_element(seq.begin(), seq.end());
      return 2.0L * static_cast<long double>(std::max(top, *hi - *lo));
    }
    default: return 0.0L;
  }
}

std::string require_seed_for(const ExperimentConfig& c, const std::string& what) {
  if (!c.seed) throw InvalidArgument(what + " is randomized and needs a seed");
  return {};
}

Json config_echo(const ExperimentConfig& c) { return c.to_json(); }

Json base_report(const ExperimentConfig& c) {
  Json body;
  body["command"] = c.command;
  body["config"] = config_echo(c);
  return report_envelope(body);
}

// ---- commands ----------------------------------------------------------------

RunOutcome run_basis(const ExperimentConfig& c) {
  if (c.output.empty()) throw InvalidArgument("basis: an output manifest path is required");
  const auto basis = build_basis(c.params);
  RunOutcome out;
  out.report = base_report(c);
  const Json manifest = write_basis_elements(c.output, basis);
  for (const auto& [key, value] : manifest.items()) out.report[key] = value;
  return out;
}

HypothesisOptions hypothesis_options(const Params& p, const ExperimentConfig& c) {
  HypothesisOptions o;
  o.orthogonality_tol = p.get("orthogonality_tol", o.orthogonality_tol);
  o.delta_threshold = p.get("delta_threshold", o.delta_threshold);
  o.max_family = p.get<std::size_t>("max_family", o.max_family);
  o.full_scan_max = p.get<std::size_t>("full_scan_max", o.full_scan_max);
  o.seed = c.seed.value_or(0);
  return o;
}

RunOutcome run_check(const ExperimentConfig& c) {
  const Params p(c.params,
                 {"basis", "embedding_trials", "p", "orthogonality_tol", "delta_threshold", "max_family",
                  "full_scan_max"},
                 "check");
  const auto trials = p.get<std::size_t>("embedding_trials", 0);
  if (trials > 0) require_seed_for(c, "check with embedding_trials");
  const auto basis = read_basis(p.require<std::string>("basis"));
  const auto rep = full_report(basis, hypothesis_options(p, c));
  RunOutcome out;
  out.report = base_report(c);
  out.report["hypotheses"] = to_json(rep);
  out.report["verdict"] = to_string(rep.verdict);
  out.report["delta"] = rep.h3_delta();
  if (trials > 0) {
    std::vector<double> ps;
    if (p.has("p") && p.raw("p").is_array())
      ps = p.require<std::vector<double>>("p");
    else
      ps = {p.get("p", 4.0)};
    Json emb = Json::array();
    for (double q : ps) emb.push_back(to_json(embedding_constant(basis, q, trials, *c.seed)));
    out.report["embedding"] = emb;
  }
  return out;
}

RunOutcome run_sidon(const ExperimentConfig& c) {
  const Params p(c.params, {"h", "count", "method", "q", "limit", "checkpoints"}, "sidon");
  const auto method = p.get<std::string>("method", "greedy");
  sidon::BhSequence seq;
  if (method == "greedy") {
    const int h = p.get("h", 2);
    seq = sidon::greedy_bh(h, p.positive("count"), p.get<std::int64_t>("limit", 100'000'000));
  } else if (method == "singer") {
    if (p.get("h", 2) != 2) throw InvalidArgument("sidon: singer sets are B_2; h must be 2");
    seq = sidon::singer_difference_set(p.require<int>("q"));
  } else {
    throw InvalidArgument("sidon: unknown method '" + method + "' (expected greedy|singer)");
  }
  RunOutcome out;
  out.report = base_report(c);
  const Json body = to_json(seq);
  for (const auto& [key, value] : body.items()) out.report[key] = value;
  const auto verdict = sidon::verify_bh(seq.terms, seq.h);
  out.report["verification"] = to_json(verdict);
  if (seq.method == sidon::Method::singer)
    out.report["perfect_difference_set"] = sidon::is_perfect_difference_set(seq.terms, seq.modulus);
  out.report["density"] =
      to_json(sidon::density_profile(seq.terms, p.get<std::vector<std::int64_t>>("checkpoints", {})));
  if (!verdict.ok) {
    out.exit_code = kExitViolation;
    out.message = "generated sequence failed B_h verification";
  }
  return out;
}

RunOutcome run_retrieve(const ExperimentConfig& c) {
  const Params p(c.params, {"basis", "modulus", "tol"}, "retrieve");
  const auto basis = read_basis(p.require<std::string>("basis"));
  const auto modulus = read_function_csv(p.require<std::string>("modulus"), basis.measure());
  RecoveryOptions o;
  o.tol = p.get("tol", o.tol);
  RunOutcome out;
  out.report = base_report(c);
  out.report["recovery"] = to_json(recover_coefficients(basis, modulus, o));
  return out;
}

std::pair<std::size_t, std::size_t> parse_adversarial(const std::string& spec) {
  const auto x = spec.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(spec);
    std::size_t used = 0;
    const long long r = std::stoll(spec.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(spec);
    const long long s = std::stoll(spec.substr(x + 1), &used);
    if (used != spec.size() - x - 1 || r < 1 || s < 1) throw std::invalid_argument(spec);
    return {static_cast<std::size_t>(r), static_cast<std::size_t>(s)};
  } catch (const std::logic_error&) {
    throw InvalidArgument("adversarial must look like RESTARTSxSTEPS, e.g. 32x200; got '" + spec + "'");
  }
}

bool spr_expected(const OrthoBasis& basis) {
  return basis.provenance().spr_candidate && full_report(basis).verdict == HypothesisVerdict::satisfied;
}

RunOutcome run_stability(const ExperimentConfig& c) {
  const Params p(c.params, {"basis", "p", "trials", "adversarial", "holder_trials"}, "stability");
  require_seed_for(c, "stability");
  const auto basis = read_basis(p.require<std::string>("basis"));
  const double pw = p.get("p", 4.0);
  if (!(pw >= 1.0)) throw InvalidArgument("stability: p must be >= 1");
  auto rep = monte_carlo_spr(basis, static_cast<std::size_t>(p.positive("trials", 1000)), pw, *c.seed);
  if (p.has("adversarial")) {
    const auto [restarts, steps] = parse_adversarial(p.require<std::string>("adversarial"));
    rep = adversarial_from(basis, rep, restarts, steps, *c.seed);
  }
  if (p.has("holder_trials"))
    rep.gamma_fit = holder_fit(basis, static_cast<std::size_t>(p.positive("holder_trials")), pw, *c.seed).gamma;
  const bool expected = spr_expected(basis);
  RunOutcome out;
  out.report = base_report(c);
  out.report["spr_expected"] = expected;
  out.report["stability"] = to_json(rep);
  if (expected && !rep.spr_consistent()) {
    out.exit_code = kExitViolation;
    out.message = "SPR violation found on a basis that satisfies the hypotheses";
  }
  return out;
}

struct IdentityBatch {
  std::vector<double> residual_i, residual_ii, margin_iii, residual_iv;
  std::size_t inequality_failures = 0;
  double max_i = 0, max_ii = 0, max_iv = 0, min_margin = kInfinity;
};

IdentityBatch identity_batch(const OrthoBasis& basis, double delta, std::size_t pairs, std::uint64_t seed,
                             std::uint64_t stream) {
  const LemmaSuite suite(basis, delta);
  std::vector<IdentityResiduals> res(pairs);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs); ++k) {
    auto rng = trial_stream(seed, stream, static_cast<std::size_t>(k));
    const auto a = random_unit_coeffs(rng, basis.size(), basis.field());
    const auto b = random_unit_coeffs(rng, basis.size(), basis.field());
    res[static_cast<std::size_t>(k)] = suite.evaluate(a, b);
  }
  IdentityBatch out;
  for (const auto& r : res) {
    out.residual_i.push_back(r.residual_i);
    out.residual_ii.push_back(r.residual_ii);
    out.margin_iii.push_back(r.margin_iii / r.scale);
    out.max_i = std::max(out.max_i, r.residual_i);
    out.max_ii = std::max(out.max_ii, r.residual_ii);
    out.min_margin = std::min(out.min_margin, r.margin_iii / r.scale);
    if (!r.inequality_holds) ++out.inequality_failures;
    if (r.residual_iv) {
      out.residual_iv.push_back(*r.residual_iv);
      out.max_iv = std::max(out.max_iv, *r.residual_iv);
    }
  }
  return out;
}

Json batch_json(const IdentityBatch& b, bool detail) {
  Json j;
  j["max_residual_i"] = b.max_i;
  j["max_residual_ii"] = b.max_ii;
  if (!b.residual_iv.empty()) j["max_residual_iv"] = b.max_iv;
  j["min_relative_margin_iii"] = b.min_margin;
  j["inequality_failures"] = b.inequality_failures;
  if (detail) {
    j["residual_i"] = b.residual_i;
    j["residual_ii"] = b.residual_ii;
    j["relative_margin_iii"] = b.margin_iii;
    if (!b.residual_iv.empty()) j["residual_iv"] = b.residual_iv;
  }
  return j;
}

RunOutcome run_identity(const ExperimentConfig& c) {
  const Params p(c.params, {"basis", "pairs"}, "identity");
  require_seed_for(c, "identity");
  const auto basis = read_basis(p.require<std::string>("basis"));
  const auto hyp = full_report(basis);
  const auto batch =
      identity_batch(basis, hyp.h3_delta(), static_cast<std::size_t>(p.positive("pairs", 1000)), *c.seed,
                     kIdentityStream);
  RunOutcome out;
  out.report = base_report(c);
  out.report["delta"] = hyp.h3_delta();
  out.report["verdict"] = to_string(hyp.verdict);
  out.report["identities"] = batch_json(batch, true);
  if (hyp.verdict == HypothesisVerdict::satisfied && batch.inequality_failures > 0) {
    out.exit_code = kExitViolation;
    out.message = "moment-gap inequality failed on a basis that satisfies the hypotheses";
  }
  return out;
}

// ---- reproduce-example -------------------------------------------------------

struct ExampleResult {
  Json results = Json::object();
  std::string expected;
  bool matched = false;
  std::optional<double> delta;
};

struct ExampleArgs {
  std::optional<int> m;
  std::optional<int> grid;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;

  int count(int fallback) const { return m.value_or(fallback); }
};

Json basis_params(std::initializer_list<std::pair<const char*, Json>> kv, const ExampleArgs& args) {
  Json j = Json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  if (args.grid) j["grid"] = *args.grid;
  return j;
}

Json mc_summary(const StabilityReport& r) {
  Json j;
  j["p"] = r.p;
  j["sup_ratio"] = r.sup_ratio;
  j["violation_count"] = r.violation_count;
  j["trials"] = r.trials;
  j["probes"] = r.probes;
  j["theoretical_bound"] = r.theoretical_bound ? Json(*r.theoretical_bound) : Json(nullptr);
  return j;
}

// Hypotheses satisfied and Monte Carlo at each p finds no violation.
ExampleResult spr_example(const OrthoBasis& basis, const ExampleArgs& args, std::initializer_list<double> ps,
                          std::initializer_list<double> embed_ps, const std::string& expected) {
  ExampleResult ex;
  ex.expected = expected;
  const auto hyp = full_report(basis);
  ex.delta = hyp.h3_delta();
  ex.results["hypotheses"] = to_json(hyp);
  Json emb = Json::array();
  for (double q : embed_ps) emb.push_back(to_json(embedding_constant(basis, q, args.trials, args.seed)));
  ex.results["embedding"] = emb;
  Json mc = Json::array();
  bool clean = true;
  for (double q : ps) {
    const auto rep = monte_carlo_spr(basis, args.trials, q, args.seed);
    clean = clean && rep.spr_consistent() && std::isfinite(rep.sup_ratio);
    mc.push_back(mc_summary(rep));
  }
  ex.results["stability"] = mc;
  ex.matched = hyp.verdict == HypothesisVerdict::satisfied && clean;
  return ex;
}

ExampleResult example_target(const std::string& target, const ExampleArgs& args) {
  if (target == "example1") {
    const auto basis = build_basis(basis_params({{"kind", "iid"}, {"support", "complex4"}, {"m", args.count(4)}}, args));
    return spr_example(basis, args, {4.0, 2.0}, {4.0, 6.0},
                       "complex iid span satisfies the hypotheses; no SPR violation at p = 4 or p = 2");
  }
  if (target == "example2") {
    const auto basis = build_basis(basis_params(
        {{"kind", "lacunary-poly"}, {"alpha", Json::array({1.0, 0.5})}, {"multiplier", 5}, {"m", args.count(3)}},
        args));
    return spr_example(basis, args, {4.0, 2.0}, {4.0, 6.0},
                       "dilated polynomial span satisfies the hypotheses; no SPR violation at p = 4 or p = 2");
  }
  if (target == "example3") {
    const auto basis = build_basis(basis_params(
        {{"kind", "lacunary-sine"}, {"base", 4}, {"m", args.count(5)}, {"grid", args.grid.value_or(16384)}}, args));
    auto ex = spr_example(basis, args, {4.0}, {4.0},
                          "real lacunary sines (base 4) satisfy the real hypotheses with delta = 1/2");
    ex.matched = ex.matched && std::abs(*ex.delta - 0.5) <= 1e-10;
    return ex;
  }
  if (target == "example4") {
    const auto basis = build_basis(basis_params({{"kind", "iid"}, {"support", "ternary"}, {"m", args.count(6)}}, args));
    auto ex = spr_example(basis, args, {4.0, 2.0}, {4.0, 6.0},
                          "real iid ternary span satisfies the real hypotheses with delta = 1/2");
    ex.matched = ex.matched && std::abs(*ex.delta - 0.5) <= 1e-12;
    return ex;
  }
  if (target == "example5") {
    const int m = args.count(4);
    const auto seq = sidon::greedy_bh(2, m).terms;
    const auto verdict = sidon::verify_bh(seq, 2);
    const auto basis = build_basis(basis_params({{"kind", "rudin-2d"}, {"sequence", seq}, {"m", m}}, args));
    auto ex = spr_example(basis, args, {4.0}, {4.0},
                          "Rudin-type functions on a B_2 sequence satisfy the hypotheses; density exponents near "
                          "1/2 (B_2) and 1/3 (B_3)");
    ex.results["sequence"] = seq;
    ex.results["sequence_verification"] = to_json(verdict);
    ex.results["density_b2"] = sidon::density_profile(sidon::greedy_bh(2, 200).terms).fitted_exponent;
    ex.results["density_b3"] = sidon::density_profile(sidon::greedy_bh(3, 100).terms).fitted_exponent;
    ex.matched = ex.matched && verdict.ok;
    return ex;
  }
  if (target == "example6") {
    const int m = args.count(3);
    const auto seq = sidon::greedy_bh(2, m).terms;
    const auto basis = build_basis(basis_params({{"kind", "exponential"}, {"sequence", seq}, {"m", m}}, args));
    ExampleResult ex;
    ex.expected =
        "fixed-modulus family on a B_2 frequency set: exact quartic identity, no violation inside the family, "
        "violation on the full span, gamma(6) = 1/4";
    const LemmaSuite suite(basis, 0.0);
    double max_iv = 0.0, sup = 0.0;
    std::size_t violations = 0;
    for (std::size_t t = 0; t < args.trials; ++t) {
      auto rng = trial_stream(args.seed, kExampleStream, t);
      const auto c = random_unit_coeffs(rng, basis.size(), Field::real);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      CoefVec a(basis.size()), b(basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        a[k] = std::abs(c[k]) * std::polar(1.0, phase(rng));
        b[k] = std::abs(c[k]) * std::polar(1.0, phase(rng));
      }
      max_iv = std::max(max_iv, *suite.evaluate(a, b).residual_iv);
      const auto r = spr_ratio(basis, a, b, 4.0);
      if (r.status == RatioStatus::violation) ++violations;
      if (r.status == RatioStatus::ok) sup = std::max(sup, r.ratio);
    }
    const auto span = spr_ratio(basis, unit_vector(basis.size(), 0), unit_vector(basis.size(), 1), 4.0);
    const double gamma = fixed_modulus_gamma(6.0);
    ex.results["sequence"] = seq;
    ex.results["max_residual_iv"] = max_iv;
    ex.results["family_sup_ratio_p4"] = sup;
    ex.results["family_violations"] = violations;
    ex.results["span_pair_status"] = to_string(span.status);
    ex.results["span_pair_numerator"] = span.numerator;
    ex.results["span_pair_denominator"] = span.denominator;
    ex.results["gamma_q6"] = gamma;
    ex.matched = max_iv < 1e-9 && violations == 0 && span.status == RatioStatus::violation &&
                 std::abs(gamma - 0.25) < 1e-15;
    return ex;
  }
  if (target == "prop1" || target == "prop1B") {
    const bool real = target == "prop1B";
    const auto basis =
        real ? build_basis(basis_params({{"kind", "lacunary-sine"}, {"base", 4}, {"m", args.count(5)}}, args))
             : build_basis(basis_params({{"kind", "rudin-2d"}, {"sequence", Json::array({1, 2, 5})},
                                         {"m", args.count(3)}}, args));
    ExampleResult ex;
    ex.expected = real ? "real L4 bound chain holds with zero anomalies; Hölder slope >= 0.95"
                       : "L4 bound chain holds with zero anomalies; Monte Carlo sup below the empirical-C bound";
    const auto hyp = full_report(basis);
    ex.delta = hyp.h3_delta();
    const double c4 = embedding_constant(basis, 4.0, args.trials, args.seed).constant;
    const auto mc = monte_carlo_spr(basis, args.trials, 4.0, args.seed);
    std::size_t anomalies = 0;
    double max_identity = 0.0, min_margin = kInfinity;
    auto check = [&](const CoefVec& a, const CoefVec& b) {
      const auto bc = proposition_bound_check(basis, a, b, c4, hyp.h3_delta());
      anomalies += bc.anomaly ? 1 : 0;
      max_identity = std::max(max_identity, bc.identity_residual);
      min_margin = std::min(min_margin, bc.margin_l4);
    };
    for (std::size_t t = 0; t < args.trials; ++t) {
      auto rng = trial_stream(args.seed, kExampleStream, t);
      const auto a = random_unit_coeffs(rng, basis.size(), basis.field());
      const auto b = random_unit_coeffs(rng, basis.size(), basis.field());
      check(a, b);
    }
    if (!mc.argmax_pair.first.empty()) check(mc.argmax_pair.first, mc.argmax_pair.second);
    ex.results["hypotheses"] = to_json(hyp);
    ex.results["embedding_c4"] = c4;
    ex.results["stability"] = mc_summary(mc);
    ex.results["bound_checks"] = args.trials + 1;
    ex.results["anomalies"] = anomalies;
    ex.results["min_margin_l4"] = min_margin;
    ex.results["max_identity_residual"] = max_identity;
    bool ok = hyp.verdict == HypothesisVerdict::satisfied && anomalies == 0 && mc.spr_consistent() &&
              max_identity < 1e-9;
    if (mc.theoretical_bound) ok = ok && mc.sup_ratio <= *mc.theoretical_bound;
    if (real) {
      const auto fit = holder_fit(basis, std::max<std::size_t>(50, args.trials / 20), 4.0, args.seed);
      ex.results["holder_fit"] = to_json(fit);
      ok = ok && fit.gamma >= 0.95;
    }
    ex.matched = ok;
    return ex;
  }
  if (target == "cor-L6") {
    ExampleResult ex;
    ex.expected = "interpolation exponent theta(6) = 1/4; L6-bounded iid span has no L2 violation";
    const double theta = interpolation_theta(6.0);
    const auto basis = build_basis(basis_params({{"kind", "iid"}, {"support", "ternary"}, {"m", args.count(6)}}, args));
    const auto hyp = full_report(basis);
    ex.delta = hyp.h3_delta();
    const auto c6 = embedding_constant(basis, 6.0, args.trials, args.seed);
    const auto mc = monte_carlo_spr(basis, args.trials, 2.0, args.seed);
    ex.results["theta_q6"] = theta;
    ex.results["embedding_c6"] = c6.constant;
    ex.results["stability"] = mc_summary(mc);
    ex.matched = std::abs(theta - 0.25) < 1e-15 && hyp.verdict == HypothesisVerdict::satisfied &&
                 mc.spr_consistent() && std::isfinite(c6.constant);
    return ex;
  }
  if (target == "counterexample-rademacher") {
    ExampleResult ex;
    ex.expected = "Rademacher coordinates are degenerate (|r| = 1) and |r_1| = |r_2| gives a violation";
    const auto basis = build_basis(basis_params(
        {{"kind", "iid"}, {"support", "rademacher"}, {"m", args.count(4)}, {"enforce_hypotheses", false}}, args));
    const auto hyp = full_report(basis);
    ex.delta = hyp.h3_delta();
    const auto r = spr_ratio(basis, unit_vector(basis.size(), 0), unit_vector(basis.size(), 1), 2.0);
    ex.results["hypotheses"] = to_json(hyp);
    ex.results["pair_status"] = to_string(r.status);
    ex.results["pair_numerator"] = r.numerator;
    ex.results["pair_denominator"] = r.denominator;
    ex.matched = hyp.verdict == HypothesisVerdict::degenerate && r.status == RatioStatus::violation &&
                 r.denominator < 1e-10 && r.numerator > 0.1;
    return ex;
  }
  if (target == "counterexample-base3") {
    ExampleResult ex;
    ex.expected = "base-3 sines fail the real orthogonality hypothesis with witness |<s_n, r_n r_(n+1)>| = 1/2";
    const auto basis =
        build_basis(basis_params({{"kind", "lacunary-sine"}, {"base", 3}, {"m", args.count(3)}}, args));
    const auto orth = check_orthogonality(basis);
    ex.results["orthogonality"] = to_json(orth, basis.field());
    ex.results["witness_abs"] = std::abs(orth.witness_value);
    ex.matched = !orth.passed && std::abs(std::abs(orth.witness_value) - 0.5) <= 1e-10;
    return ex;
  }
  if (target == "counterexample-complex-conjugate") {
    ExampleResult ex;
    ex.expected = "complex span of two real sines: f = r1 + i r2 and conj(f) share a modulus but differ by no phase";
    const auto basis = build_basis(
        basis_params({{"kind", "lacunary-sine"}, {"base", 4}, {"m", 2}, {"field", "complex"}}, args));
    const double h = std::sqrt(0.5);
    const CoefVec a{h, cplx(0.0, h)};
    const CoefVec b{h, cplx(0.0, -h)};
    Json pairs = Json::array();
    bool ok = true;
    for (double q : {2.0, 4.0}) {
      const auto r = spr_ratio(basis, a, b, q);
      pairs.push_back({{"p", q}, {"status", to_string(r.status)}, {"numerator", r.numerator},
                       {"denominator", r.denominator}});
      ok = ok && r.status == RatioStatus::violation && r.denominator < 1e-10 && r.numerator > 0.1;
    }
    ex.results["pairs"] = pairs;
    ex.matched = ok;
    return ex;
  }
  throw InvalidArgument("reproduce-example: unknown target '" + target + "'");
}

RunOutcome run_reproduce(const ExperimentConfig& c) {
  const Params p(c.params, {"target", "m", "grid", "trials"}, "reproduce-example");
  const auto target = p.require<std::string>("target");
  if (std::find(example_targets().begin(), example_targets().end(), target) == example_targets().end())
    throw InvalidArgument("reproduce-example: unknown target '" + target + "'");
  const bool randomized = target.rfind("counterexample", 0) != 0;
  if (randomized) require_seed_for(c, "reproduce-example " + target);
  ExampleArgs args;
  if (p.has("m")) args.m = p.positive("m");
  if (p.has("grid")) args.grid = p.positive("grid");
  args.trials = static_cast<std::size_t>(p.positive("trials", 1000));
  args.seed = c.seed.value_or(0);

  auto ex = example_target(target, args);
  RunOutcome out;
  out.report = base_report(c);
  out.report["paper_example"] = target;
  out.report["expected_verdict"] = ex.expected;
  out.report["verdict_matched"] = ex.matched;
  if (ex.delta) out.report["delta"] = *ex.delta;
  out.report["results"] = ex.results;
  if (!ex.matched) {
    out.exit_code = kExitViolation;
    out.message = target + ": expected verdict not reproduced";
  }
  return out;
}

}  // namespace

Json ExperimentConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["params"] = params;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["output"] = output;
  return j;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "command" && key != "params" && key != "seed" && key != "output")
      throw InvalidArgument("config: unknown field '" + key + "'");
  ExperimentConfig c;
  if (!j.contains("command") || !j.at("command").is_string()) throw InvalidArgument("config: 'command' must be a string");
  c.command = j.at("command").get<std::string>();
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
    throw InvalidArgument("config: unknown command '" + c.command + "'");
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw InvalidArgument("config: 'params' must be an object");
    c.params = j.at("params");
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw InvalidArgument("config: 'seed' must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw InvalidArgument("config: 'output' must be a string");
    c.output = j.at("output").get<std::string>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> v{"basis",     "check",    "sidon",
                                          "retrieve",  "stability", "identity",
                                          "reproduce-example"};
  return v;
}

const std::vector<std::string>& example_targets() {
  static const std::vector<std::string> v{"example1", "example2", "example3", "example4", "example5",
                                          "example6", "prop1",    "prop1B",   "cor-L6",
                                          "counterexample-rademacher", "counterexample-base3",
                                          "counterexample-complex-conjugate"};
  return v;
}

int default_grid(const Json& params) {
  const Params p(params, kBasisKeys, "basis");
  const auto kind = basis_kind_from_string(p.require<std::string>("kind"));
  return next_pow2_above(grid_threshold(p, kind, p.positive("m")));
}

OrthoBasis build_basis(const Json& params) {
  const Params p(params, kBasisKeys, "basis");
  const auto kind = basis_kind_from_string(p.require<std::string>("kind"));
  const int m = p.positive("m");
  auto grid = [&] { return p.has("grid") ? p.positive("grid") : default_grid(params); };
  switch (kind) {
    case BasisKind::lacunary_sine:
      return lacunary_sine_basis(m, p.get("base", 4), grid(), field_from_string(p.get<std::string>("field", "real")));
    case BasisKind::lacunary_poly:
      return lacunary_poly_basis(coeffs_from_json(p.require<Json>("alpha")), p.require<int>("multiplier"), m, grid());
    case BasisKind::rudin_2d: return rudin_2d_basis(resolve_sequence(p, m), m, grid());
    case BasisKind::iid: {
      IidOptions o;
      o.enforce_hypotheses = p.get("enforce_hypotheses", true);
      return iid_basis(resolve_support(p), m, o);
    }
    case BasisKind::exponential: return exponential_basis(resolve_sequence(p, m), grid());
    case BasisKind::custom: break;
  }
  throw InvalidArgument("basis: kind 'custom' cannot be built from parameters");
}

RunOutcome execute(const ExperimentConfig& c) {
  if (c.command == "basis") return run_basis(c);
  if (c.command == "check") return run_check(c);
  if (c.command == "sidon") return run_sidon(c);
  if (c.command == "retrieve") return run_retrieve(c);
  if (c.command == "stability") return run_stability(c);
  if (c.command == "identity") return run_identity(c);
  if (c.command == "reproduce-example") return run_reproduce(c);
  throw InvalidArgument("unknown command '" + c.command + "'");
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto outcome = execute(config);
    if (config.output.empty())
      out << dump_json(outcome.report);
    else
      emit_report(outcome.report, config.output);
    if (outcome.exit_code != kExitOk) err << "spr-lab: " << outcome.message << '\n';
    return outcome.exit_code;
  } catch (const DegenerateBasis& e) {
    err << "spr-lab: degenerate basis: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    err << "spr-lab: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "spr-lab: malformed JSON: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace spr
