#pragma once

// Deterministic JSON reports: insertion-ordered keys, two-space indent, and
// doubles printed with 17 significant digits. Non-finite numbers become null.

#include <filesystem>
#include <string>

#include "spr/hypotheses.hpp"
#include "spr/io.hpp"
#include "spr/retrieval.hpp"
#include "spr/sidon.hpp"
#include "spr/stability.hpp"

namespace spr {

std::string format_number(double v);
std::string dump_json(const Json& j);

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"tool", "version"} followed by `body`'s keys.
Json report_envelope(const Json& body);
void emit_report(const Json& report, const std::filesystem::path& path);

Json to_json(const OrthogonalityCheck& c, Field field);
Json to_json(const MomentCheck& m);
Json to_json(const HypothesisReport& r);
Json to_json(const EmbeddingEstimate& e);
Json to_json(const RecoveryResult& r);
Json to_json(const StabilityReport& r);
Json to_json(const HolderFit& h);
Json to_json(const IdentityResiduals& r);
Json to_json(const BoundCheck& b);
Json to_json(const sidon::Verdict& v);
Json to_json(const sidon::DensityProfile& d);

}  // namespace spr
