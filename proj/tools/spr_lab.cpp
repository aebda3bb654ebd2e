// spr-lab: command-line front end. Each subcommand builds an ExperimentConfig
// from its flags and hands it to spr::run, exactly as `run --config` would.

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spr/errors.hpp"
#include "spr/experiment.hpp"
#include "spr/report.hpp"

namespace {

using spr::Json;

// Flags that were given end up in params; absent ones leave the library defaults.
struct Builder {
  CLI::App* app;
  Json params = Json::object();
  std::vector<std::function<void()>> fill;

  template <class T>
  void opt(const std::string& flag, const std::string& key, const std::string& help, bool required = false) {
    auto value = std::make_shared<T>();
    auto* o = app->add_option(flag, *value, help);
    if (required) o->required();
    fill.push_back([this, o, value, key] {
      if (o->count() > 0) params[key] = *value;
    });
  }

  Json collect() {
    for (auto& f : fill) f();
    return params;
  }
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_seed(CLI::App* app, Common& c) { app->add_option("--seed", c.seed, "Seed for randomized steps"); }

void add_out(CLI::App* app, Common& c, const std::string& flag = "--out") {
  app->add_option(flag, c.out, "Report path (stdout when omitted)");
}

Json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception&) {
    throw spr::InvalidArgument(what + " is not valid JSON: " + text);
  }
}

void apply_threads(std::optional<int> threads) {
  if (!threads) {
    if (const char* env = std::getenv("SPR_LAB_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        throw spr::InvalidArgument(std::string("SPR_LAB_THREADS must be an integer, got '") + env + "'");
      }
    }
  }
  if (threads) {
    if (*threads < 1) throw spr::InvalidArgument("thread count must be >= 1");
    omp_set_num_threads(*threads);
  }
}

// |f| for f = Σ a_k r_k, written as a function CSV; feeds `retrieve`.
int write_modulus(const std::string& basis_path, const std::string& coeffs, const std::string& out) {
  const auto basis = spr::read_basis(basis_path);
  const Json j = coeffs.starts_with("[") ? parse_json_arg(coeffs, "--coeffs") : spr::read_json_file(coeffs);
  const auto a = spr::coeffs_from_json(j);
  if (a.size() != basis.size())
    throw spr::InvalidArgument("--coeffs has " + std::to_string(a.size()) + " entries, basis has " +
                               std::to_string(basis.size()));
  if (basis.field() == spr::Field::real)
    for (auto z : a)
      if (z.imag() != 0.0) throw spr::InvalidArgument("real basis needs real coefficients");
  spr::write_function_csv(out, spr::synthesize(basis, a).modulus());
  return spr::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spr-lab: stable phase retrieval experiments on orthonormal bases"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPR_LAB_VERSION);
  std::optional<int> threads;
  app.add_option("--threads", threads, "OpenMP threads (default: SPR_LAB_THREADS, then the runtime default)");

  std::vector<std::pair<CLI::App*, std::string>> commands;
  std::vector<std::unique_ptr<Builder>> builders;
  std::vector<std::unique_ptr<Common>> commons;
  auto make = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, name);
    builders.push_back(std::make_unique<Builder>(Builder{sub}));
    commons.push_back(std::make_unique<Common>());
    return std::pair{builders.back().get(), commons.back().get()};
  };

  // basis
  std::string alpha_text, sequence_text, support_text;
  bool no_enforce = false;
  {
    auto [b, c] = make("basis", "Sample an orthonormal basis and write its manifest and element CSVs");
    b->opt<std::string>("--kind", "kind", "lacunary-sine | lacunary-poly | rudin-2d | iid | exponential", true);
    b->opt<int>("--m", "m", "Number of elements", true);
    b->opt<int>("--base", "base", "Lacunary-sine base (default 4)");
    b->opt<int>("--grid", "grid", "Grid points per axis (default: smallest power of two above the exactness bound)");
    b->opt<std::string>("--field", "field", "real | complex (lacunary-sine)");
    b->opt<int>("--multiplier", "multiplier", "Lacunary-poly dilation A");
    b->opt<std::string>("--sequence-file", "sequence_file", "B_h sequence JSON from `sidon`");
    b->app->add_option("--alpha", alpha_text, "Lacunary-poly coefficients as JSON, e.g. [1,0.5] or [[1,0],[0,1]]");
    b->app->add_option("--sequence", sequence_text, "Integer sequence as JSON, e.g. [1,2,5]");
    b->app->add_option("--support", support_text, "iid preset (ternary|complex4|rademacher) or JSON [[re,im,p],...]");
    b->app->add_flag("--no-enforce", no_enforce, "iid: skip the hypothesis guard");
    add_out(b->app, *c);
    b->app->get_option("--out")->required();
  }
  // check
  {
    auto [b, c] = make("check", "Check the orthogonality and moment hypotheses of a basis");
    b->opt<std::string>("--basis", "basis", "Basis manifest", true);
    b->opt<std::size_t>("--embedding-trials", "embedding_trials", "Random trials for the embedding constant");
    b->opt<double>("--p", "p", "Exponent for the embedding constant (default 4)");
    b->opt<double>("--orthogonality-tol", "orthogonality_tol", "Orthogonality tolerance");
    b->opt<double>("--delta-threshold", "delta_threshold", "Smallest δ counted as a gap");
    add_seed(b->app, *c);
    add_out(b->app, *c, "--report");
  }
  // sidon
  {
    auto [b, c] = make("sidon", "Generate and verify a B_h sequence");
    b->app->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    b->opt<int>("--h", "h", "Order h (default 2)");
    b->opt<int>("--count", "count", "Number of terms (greedy)");
    b->opt<std::string>("--method", "method", "greedy | singer");
    b->opt<int>("--q", "q", "Prime power for singer");
    b->opt<std::int64_t>("--limit", "limit", "Greedy search limit");
    add_out(b->app, *c);
  }
  // retrieve
  {
    auto [b, c] = make("retrieve", "Recover coefficients from sampled |f|");
    b->opt<std::string>("--basis", "basis", "Basis manifest", true);
    b->opt<std::string>("--modulus", "modulus", "Function CSV with |f|", true);
    b->opt<double>("--tol", "tol", "Anchor tolerance");
    add_out(b->app, *c);
  }
  // stability
  {
    auto [b, c] = make("stability", "Estimate the stability ratio on a basis span");
    b->opt<std::string>("--basis", "basis", "Basis manifest", true);
    b->opt<double>("--p", "p", "Exponent (default 4)");
    b->opt<int>("--trials", "trials", "Monte Carlo pairs (default 1000)");
    b->opt<std::string>("--adversarial", "adversarial", "Hill climbing as RESTARTSxSTEPS, e.g. 32x200");
    b->opt<int>("--holder-trials", "holder_trials", "Pairs for the Hölder exponent fit");
    add_seed(b->app, *c);
    add_out(b->app, *c);
  }
  // identity
  {
    auto [b, c] = make("identity", "Evaluate the quartic identities on random pairs");
    b->opt<std::string>("--basis", "basis", "Basis manifest", true);
    b->opt<int>("--pairs", "pairs", "Random pairs (default 1000)");
    add_seed(b->app, *c);
    add_out(b->app, *c);
  }
  // reproduce-example
  {
    auto [b, c] = make("reproduce-example", "Run a named example and assert its expected verdict");
    b->opt<std::string>("target", "target", "Example name", true);
    b->opt<int>("--m", "m", "Basis size override");
    b->opt<int>("--grid", "grid", "Grid override");
    b->opt<int>("--trials", "trials", "Random trials (default 1000)");
    add_seed(b->app, *c);
    add_out(b->app, *c);
  }

  auto* run_cmd = app.add_subcommand("run", "Run a JSON experiment config");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Config file")->required();

  auto* modulus_cmd = app.add_subcommand("modulus", "Write |f| for given coefficients as a function CSV");
  std::string mod_basis, mod_coeffs, mod_out;
  modulus_cmd->add_option("--basis", mod_basis, "Basis manifest")->required();
  modulus_cmd->add_option("--coeffs", mod_coeffs, "JSON [[re,im],...] inline or a file path")->required();
  modulus_cmd->add_option("--out", mod_out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spr::kExitInvalid;
  }

  try {
    apply_threads(threads);
    if (run_cmd->parsed()) return spr::run(spr::load_config(config_path), std::cout, std::cerr);
    if (modulus_cmd->parsed()) return write_modulus(mod_basis, mod_coeffs, mod_out);

    for (std::size_t k = 0; k < commands.size(); ++k) {
      if (!commands[k].first->parsed()) continue;
      spr::ExperimentConfig config;
      config.command = commands[k].second;
      config.params = builders[k]->collect();
      config.seed = commons[k]->seed;
      config.output = commons[k]->out;
      if (config.command == "basis") {
        if (!alpha_text.empty()) config.params["alpha"] = parse_json_arg(alpha_text, "--alpha");
        if (!sequence_text.empty()) config.params["sequence"] = parse_json_arg(sequence_text, "--sequence");
        if (!support_text.empty())
          config.params["support"] =
              support_text.starts_with("[") ? parse_json_arg(support_text, "--support") : Json(support_text);
        if (no_enforce) config.params["enforce_hypotheses"] = false;
      }
      return spr::run(config, std::cout, std::cerr);
    }
  } catch (const spr::DegenerateBasis& e) {
    std::cerr << "spr-lab: degenerate basis: " << e.what() << '\n';
    return spr::kExitDegenerate;
  } catch (const spr::Error& e) {
    std::cerr << "spr-lab: " << e.what() << '\n';
    return spr::kExitInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "spr-lab: malformed JSON: " << e.what() << '\n';
    return spr::kExitInvalid;
  }
  return spr::kExitInvalid;
}
