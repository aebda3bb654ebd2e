// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "spr/errors.hpp"
#include "spr/experiment.hpp"
#include "spr/hypotheses.hpp"
#include "spr/random.hpp"
#include "spr/report.hpp"
#include "spr/retrieval.hpp"
#include "spr/sidon.hpp"
#include "spr/stability.hpp"

using namespace spr;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

CoefVec unit(std::size_t m, std::size_t k) {
  CoefVec e(m, 0.0);
  e[k] = 1.0;
  return e;
}

struct NamedBasis {
  std::string name;
  OrthoBasis basis;
};

std::vector<NamedBasis> spr_bases(int rudin_grid) {
  std::vector<NamedBasis> v;
  v.push_back({"lacunary-sine b4 M5", lacunary_sine_basis(5, 4, 16384)});
  v.push_back({"lacunary-poly (1,.5) A5 M3", lacunary_poly_basis({1.0, 0.5}, 5, 3, 1024)});
  v.push_back({"rudin-2d (1,2,5)", rudin_2d_basis({1, 2, 5}, 3, rudin_grid)});
  v.push_back({"ternary M6", iid_basis(support_preset("ternary"), 6)});
  v.push_back({"complex4 M4", iid_basis(support_preset("complex4"), 4)});
  return v;
}

// ---------------------------------------------------------------------------

Outcome c1_identities() {
  Outcome o;
  std::vector<NamedBasis> bases;
  bases.push_back({"lacunary-sine b4 M5 grid 16384", lacunary_sine_basis(5, 4, 16384)});
  bases.push_back({"rudin-2d (1,2,5) grid 512^2", rudin_2d_basis({1, 2, 5}, 3, 512)});
  bases.push_back({"ternary M6", iid_basis(support_preset("ternary"), 6)});
  for (const auto& [name, b] : bases) {
    const LemmaSuite suite(b, check_moments(b).delta);
    double worst_i = 0, worst_ii = 0;
    std::mt19937_64 rng(1001);
    const bool real = b.field() == Field::real;
    for (int t = 0; t < 1000; ++t) {
      const auto r = suite.evaluate(oracle::unit_vector(rng, b.size(), real), oracle::unit_vector(rng, b.size(), real));
      worst_i = std::max(worst_i, r.residual_i);
      worst_ii = std::max(worst_ii, r.residual_ii);
    }
    o.detail << " " << name << ": " << worst_i << "/" << worst_ii << ";";
    o.require(worst_i < 1e-9 && worst_ii < 1e-9, name);
  }
  return o;
}

Outcome c2_delta() {
  Outcome o;
  const double sine = check_moments(lacunary_sine_basis(5, 4, 16384)).delta;
  const double tern = check_moments(iid_basis(support_preset("ternary"), 6)).delta;
  o.detail << " sine " << format_number(sine) << ", ternary " << format_number(tern);
  o.require(std::abs(sine - 0.5) <= 1e-10, "sine delta");
  // Exact up to the rounding of √1.5² and the 3⁻⁶ weights.
  o.require(std::abs(tern - 0.5) <= 1e-14, "ternary delta");
  return o;
}

Outcome c3_counterexamples() {
  Outcome o;
  const auto base3 = check_orthogonality(lacunary_sine_basis(3, 3, 512));
  o.detail << " (a) |witness| " << format_number(std::abs(base3.witness_value));
  o.require(!base3.passed && std::abs(std::abs(base3.witness_value) - 0.5) <= 1e-10, "(a) base-3 witness");

  IidOptions loose;
  loose.enforce_hypotheses = false;
  const auto rad = full_report(iid_basis(support_preset("rademacher"), 4, loose));
  bool guarded = false;
  try {
    iid_basis(support_preset("rademacher"), 4);
  } catch (const DegenerateBasis&) {
    guarded = true;
  }
  o.detail << "; (b) " << to_string(rad.verdict);
  o.require(rad.verdict == HypothesisVerdict::degenerate && guarded, "(b) rademacher degenerate");

  const auto ex = spr_ratio(exponential_basis({1, 2}, 16), unit(2, 0), unit(2, 1), 4.0);
  o.detail << "; (c) " << to_string(ex.status) << " num " << format_number(ex.numerator);
  o.require(ex.status == RatioStatus::violation, "(c) exponential pair");

  const double h = std::sqrt(0.5);
  const auto cj = spr_ratio(lacunary_sine_basis(2, 4, 128, Field::complex), {h, cplx(0, h)}, {h, cplx(0, -h)}, 4.0);
  o.detail << "; (d) " << to_string(cj.status);
  o.require(cj.status == RatioStatus::violation, "(d) conjugate pair");
  return o;
}

Outcome c4_round_trip() {
  Outcome o;
  for (const auto& [name, b] : spr_bases(512)) {
    const bool real = b.field() == Field::real;
    std::mt19937_64 rng(4004);
    double worst = 0;
    int done = 0;
    while (done < 1000) {
      const auto a = oracle::unit_vector(rng, b.size(), real);
      double top = 0;
      for (auto c : a) top = std::max(top, std::abs(c));
      if (top < 0.2) continue;
      ++done;
      const auto f = synthesize(b, a);
      const auto g = reconstruct(b, f.modulus());
      worst = std::max(worst, min_phase_dist(g, f, 2.0, b.field()).distance);
    }
    o.detail << " " << name << ": " << worst << ";";
    o.require(worst <= 1e-8, name);
  }
  return o;
}

Outcome c5_inequality_and_bound() {
  Outcome o;
  for (const auto& [name, b] : spr_bases(64)) {
    const double delta = check_moments(b).delta;
    const LemmaSuite suite(b, delta);
    const double c = embedding_constant(b, 4.0, 1000, 5).constant;
    const bool real = b.field() == Field::real;
    std::mt19937_64 rng(5005);
    std::size_t failures = 0, anomalies = 0;
    double min_margin = INFINITY;
    for (int t = 0; t < 10000; ++t) {
      const auto a = oracle::unit_vector(rng, b.size(), real);
      const auto bb = oracle::unit_vector(rng, b.size(), real);
      const auto r = suite.evaluate(a, bb);
      failures += r.inequality_holds ? 0 : 1;
      min_margin = std::min(min_margin, r.margin_iii / r.scale);
      if (t < 2000) anomalies += proposition_bound_check(b, a, bb, c, delta).anomaly ? 1 : 0;
    }
    // Pairs the search itself rates worst.
    const auto mc = monte_carlo_spr(b, 500, 4.0, 5);
    anomalies += proposition_bound_check(b, mc.argmax_pair.first, mc.argmax_pair.second, c, delta).anomaly ? 1 : 0;
    o.detail << " " << name << ": fail " << failures << ", anomalies " << anomalies << ", min margin " << min_margin
             << ";";
    o.require(failures == 0 && anomalies == 0, name);
  }
  return o;
}

Outcome c6_sidon() {
  Outcome o;
  const auto b2 = sidon::greedy_bh(2, 5).terms;
  const auto b3 = sidon::greedy_bh(3, 4).terms;
  // The listed B2 prefix (1,2,5,11,22) contradicts the smallest-first rule it is
  // attributed to ({1,2,4} is already Sidon). The greedy is held to the exhaustive
  // enumeration oracle and the Mian–Chowla values; the listed tuple is checked as a B2 set.
  const std::vector<std::int64_t> listed{1, 2, 5, 11, 22};
  o.detail << " B2 greedy prefix";
  for (auto t : b2) o.detail << ' ' << t;
  o.detail << " (listed 1 2 5 11 22 is B2: " << (sidon::verify_bh(listed, 2).ok ? "yes" : "no") << ");";
  o.require(b2 == oracle::naive_greedy(2, 5) && b2 == std::vector<std::int64_t>{1, 2, 4, 8, 13}, "B2 prefix");
  o.require(sidon::verify_bh(listed, 2).ok, "listed B2 tuple");
  o.require(b3 == std::vector<std::int64_t>{1, 2, 5, 14} && b3 == oracle::naive_greedy(3, 4), "B3 prefix");
  const auto singer = sidon::singer_difference_set(2);
  o.require(singer.terms == std::vector<std::int64_t>{1, 2, 4} && singer.modulus == 7 &&
                sidon::is_perfect_difference_set(singer.terms, 7) && oracle::perfect_difference_set(singer.terms, 7),
            "Singer q=2");
  const auto& seq = listed;
  const auto good = check_orthogonality(rudin_2d_basis(seq, 5, 64));
  const auto bad = check_orthogonality(rudin_2d_basis({1, 2, 3}, 3, 32));
  o.detail << " rudin on B2 max violation " << good.max_violation << "; on (1,2,3) witness "
           << (bad.witness ? bad.witness->first.label(Field::complex) + " vs " + bad.witness->second.label(Field::complex)
                           : std::string("none"));
  o.require(sidon::verify_bh(seq, 2).ok && good.passed && good.max_violation <= 1e-10, "rudin on B2");
  o.require(!bad.passed && bad.witness.has_value(), "rudin on (1,2,3)");
  return o;
}

Outcome c7_density() {
  Outcome o;
  const double e2 = sidon::density_profile(sidon::greedy_bh(2, 200).terms).fitted_exponent;
  const double e3 = sidon::density_profile(sidon::greedy_bh(3, 100).terms).fitted_exponent;
  o.detail << " B2 " << e2 << ", B3 " << e3;
  o.require(e2 >= 0.40 && e2 <= 0.55, "B2 exponent");
  o.require(e3 >= 0.28 && e3 <= 0.45, "B3 exponent");
  return o;
}

Outcome c8_exponents() {
  Outcome o;
  const auto fit = holder_fit(lacunary_sine_basis(5, 4, 16384), 200, 4.0, 8);
  const double theta = interpolation_theta(6.0), gamma = fixed_modulus_gamma(6.0);
  o.detail << " slope " << fit.gamma << " over " << fit.decades << " decades; theta(6) " << theta << "; gamma(6) "
           << gamma;
  o.require(fit.gamma >= 0.95, "holder slope");
  o.require(std::abs(theta - 0.25) < 1e-15 && std::abs(gamma - 0.25) < 1e-15, "closed-form exponents");
  return o;
}

// ‖f − e^{iθ}g‖₄⁴ on a uniform 10⁶-point θ grid, plain double loops.
double scan_p4(const std::vector<cplx>& f, const std::vector<cplx>& g, std::span<const double> w) {
  constexpr std::size_t kPoints = 1'000'000;
  double best = INFINITY;
  for (std::size_t k = 0; k < kPoints; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / kPoints;
    const cplx z{std::cos(t), std::sin(t)};
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = std::norm(f[i] - z * g[i]);
      s += w[i] * a * a;
    }
    best = std::min(best, s);
  }
  return std::pow(best, 0.25);
}

Outcome c9_phase_minimization() {
  Outcome o;
  std::mt19937_64 rng(9009);
  std::normal_distribution<double> z;
  const auto m2 = make_interval_grid(64);
  double worst2 = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto f = SampledFunction::generate(m2, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const auto g = SampledFunction::generate(m2, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const double closed = min_phase_dist(f, g, 2.0, Field::complex).distance;
    const double scan = oracle::refined_phase_scan(oracle::values(f), oracle::values(g), m2->weights(), 2.0, 4096);
    worst2 = std::max(worst2, std::abs(closed - scan));
  }
  const auto m4 = make_interval_grid(16);
  double worst4 = 0;
  for (int t = 0; t < 100; ++t) {
    const auto f = SampledFunction::generate(m4, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const auto g = SampledFunction::generate(m4, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const double refined = min_phase_dist(f, g, 4.0, Field::complex).distance;
    const double scan = scan_p4(oracle::values(f), oracle::values(g), m4->weights());
    worst4 = std::max(worst4, std::abs(refined - scan));
    o.require(std::abs(refined - scan) <= 1e-8, "p=4 pair " + std::to_string(t));
  }
  // Nearly aligned pairs have minima sharper than the 10⁶ grid resolves, so they
  // are held to the scan plus golden-section oracle instead.
  double worst_aligned = 0;
  for (int t = 0; t < 34; ++t) {
    const auto g = SampledFunction::generate(m4, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const auto f = std::polar(1.0, 0.1 * t) * g +
                   1e-3 * SampledFunction::generate(m4, [&](std::size_t) { return cplx(z(rng), z(rng)); });
    const double refined = min_phase_dist(f, g, 4.0, Field::complex).distance;
    const double ref = oracle::refined_phase_scan(oracle::values(f), oracle::values(g), m4->weights(), 4.0, 100000);
    worst_aligned = std::max(worst_aligned, std::abs(refined - ref));
    o.require(std::abs(refined - ref) <= 1e-8, "aligned p=4 pair " + std::to_string(t));
  }
  o.detail << " p=2 max |closed - scan| " << worst2 << "; p=4 max |refined - scan| " << worst4
           << "; aligned p=4 max |refined - oracle| " << worst_aligned;
  o.require(worst2 <= 1e-10, "p=2");
  return o;
}

Outcome c10_determinism() {
  Outcome o;
  const std::vector<std::string> configs = {
      R"({"command": "reproduce-example", "params": {"target": "example3", "trials": 300}, "seed": 1})",
      R"({"command": "reproduce-example", "params": {"target": "prop1", "trials": 300}, "seed": 2})",
      R"({"command": "reproduce-example", "params": {"target": "counterexample-base3"}})",
      R"({"command": "sidon", "params": {"h": 3, "count": 40}})",
  };
  for (const auto& text : configs) {
    const auto c = parse_config(Json::parse(text));
    omp_set_num_threads(1);
    const auto a = dump_json(execute(c).report);
    omp_set_num_threads(3);
    const auto b = dump_json(execute(c).report);
    const auto again = dump_json(execute(c).report);
    o.require(a == b && b == again, text);
  }
  o.detail << " " << configs.size() << " configs, 1 and 3 threads";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 exact identities", c1_identities},
      {"2 delta extraction", c2_delta},
      {"3 counterexamples", c3_counterexamples},
      {"4 reconstruction round trip", c4_round_trip},
      {"5 moment-gap inequality and bound chain", c5_inequality_and_bound},
      {"6 Sidon machinery", c6_sidon},
      {"7 density exponents", c7_density},
      {"8 Hoelder exponents", c8_exponents},
      {"9 phase minimization", c9_phase_minimization},
      {"10 determinism", c10_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s:%s (%.1fs)\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
