#pragma once

// File formats.
//
//   sampled function   CSV, header `atom,weight,re,im`, one row per atom
//   measure            {"kind", "n", "support": [[re,im,prob],...], "m"}
//   basis              JSON manifest (field, measure, provenance, element CSV names)
//   B_h sequence       {"h", "method", "terms", ...}
//
// Numbers are written with 17 significant digits so every file round-trips exactly.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "spr/bases.hpp"
#include "spr/sidon.hpp"

namespace spr {

using Json = nlohmann::ordered_json;

Json to_json(cplx z);                   // [re, im]
cplx cplx_from_json(const Json& j);     // [re, im] or a plain number
Json to_json(const CoefVec& a);         // [[re, im], ...]
CoefVec coeffs_from_json(const Json& j);

Json to_json(const DiscreteMeasure& measure);
MeasurePtr measure_from_json(const Json& j);

Json to_json(const Provenance& provenance);
Provenance provenance_from_json(const Json& j);

Json to_json(const sidon::BhSequence& seq);
sidon::BhSequence bh_sequence_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);

void write_function_csv(const std::filesystem::path& path, const SampledFunction& f);
/// Reads a function on `measure`; the atom count and weights must match.
SampledFunction read_function_csv(const std::filesystem::path& path, const MeasurePtr& measure);

/// Writes one CSV per element (`<stem>_r<k>.csv` beside `manifest`) and
/// returns the manifest document without writing it.
Json write_basis_elements(const std::filesystem::path& manifest, const OrthoBasis& basis);
/// write_basis_elements plus the manifest itself.
void write_basis(const std::filesystem::path& manifest, const OrthoBasis& basis);
OrthoBasis read_basis(const std::filesystem::path& manifest);

}  // namespace spr
