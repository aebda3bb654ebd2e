#pragma once

// Batch front end: a single JSON config names a command, its parameters, a
// seed and an output path. The CLI subcommands build the same config from
// flags, so both routes share one code path and one report format.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spr/bases.hpp"
#include "spr/io.hpp"

namespace spr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitViolation = 4;

struct ExperimentConfig {
  std::string command;
  Json params = Json::object();
  std::optional<std::uint64_t> seed;
  std::string output;  ///< empty: report goes to stdout

  Json to_json() const;
};

/// Strict: only command, params, seed and output are accepted.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& commands();
const std::vector<std::string>& example_targets();

struct RunOutcome {
  int exit_code = kExitOk;
  Json report;
  std::string message;  ///< why the exit code is nonzero
};

/// Runs the pipeline and returns the report without writing it. Side outputs
/// (basis CSVs) are written. Throws spr::Error subclasses on failure.
RunOutcome execute(const ExperimentConfig& config);

/// execute + emit_report, with errors mapped to exit codes and reported on `err`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Builds a basis from `basis` command parameters.
OrthoBasis build_basis(const Json& params);

/// Smallest power of two strictly above the exactness threshold of a basis kind.
int default_grid(const Json& params);

}  // namespace spr
