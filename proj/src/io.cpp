#include "spr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spr/errors.hpp"
#include "spr/report.hpp"

namespace spr {
namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json support_to_json(const std::vector<SupportPoint>& support) {
  Json arr = Json::array();
  for (const auto& s : support) arr.push_back({s.value.real(), s.value.imag(), s.probability});
  return arr;
}

std::vector<SupportPoint> support_from_json(const Json& j) {
  std::vector<SupportPoint> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3) throw InvalidArgument("support rows must be [re, im, prob]");
    out.push_back({{row[0].get<double>(), row[1].get<double>()}, row[2].get<double>()});
  }
  return out;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("expected a number or [re, im], got " + j.dump());
}

Json to_json(const CoefVec& a) {
  Json arr = Json::array();
  for (auto c : a) arr.push_back(to_json(c));
  return arr;
}

CoefVec coeffs_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("coefficients must be an array");
  CoefVec out;
  for (const auto& c : j) out.push_back(cplx_from_json(c));
  return out;
}

Json to_json(const DiscreteMeasure& measure) {
  Json j;
  j["kind"] = to_string(measure.kind());
  j["n"] = measure.grid_n();
  j["support"] = support_to_json(measure.support());
  j["m"] = measure.factors();
  return j;
}

MeasurePtr measure_from_json(const Json& j) {
  try {
    const auto kind = measure_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
      case MeasureKind::interval_grid: return make_interval_grid(j.at("n").get<int>());
      case MeasureKind::square_grid: return make_square_grid(j.at("n").get<int>());
      case MeasureKind::product_space:
        return make_product_space(support_from_json(j.at("support")), j.at("m").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed measure: ") + e.what());
  }
  throw InvalidArgument("malformed measure");
}

Json to_json(const Provenance& p) {
  Json j;
  j["kind"] = to_string(p.kind);
  j["count"] = p.count;
  j["grid_n"] = p.grid_n;
  j["base"] = p.base;
  j["alpha"] = to_json(p.alpha);
  j["multiplier"] = p.multiplier;
  j["normalization_scale"] = p.normalization_scale;
  j["sequence"] = p.sequence;
  j["support"] = support_to_json(p.support);
  j["hypotheses_enforced"] = p.hypotheses_enforced;
  j["spr_candidate"] = p.spr_candidate;
  return j;
}

Provenance provenance_from_json(const Json& j) {
  try {
    Provenance p;
    p.kind = basis_kind_from_string(j.at("kind").get<std::string>());
    p.count = get_or(j, "count", 0);
    p.grid_n = get_or(j, "grid_n", 0);
    p.base = get_or(j, "base", 0);
    if (j.contains("alpha")) p.alpha = coeffs_from_json(j.at("alpha"));
    p.multiplier = get_or(j, "multiplier", 0);
    p.normalization_scale = get_or(j, "normalization_scale", 1.0);
    if (j.contains("sequence")) p.sequence = j.at("sequence").get<std::vector<std::int64_t>>();
    if (j.contains("support")) p.support = support_from_json(j.at("support"));
    p.hypotheses_enforced = get_or(j, "hypotheses_enforced", true);
    p.spr_candidate = get_or(j, "spr_candidate", true);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed provenance: ") + e.what());
  }
}

Json to_json(const sidon::BhSequence& seq) {
  Json j;
  j["h"] = seq.h;
  j["method"] = sidon::to_string(seq.method);
  j["terms"] = seq.terms;
  j["complete"] = seq.complete;
  if (seq.method == sidon::Method::singer) j["modulus"] = seq.modulus;
  return j;
}

sidon::BhSequence bh_sequence_from_json(const Json& j) {
  try {
    sidon::BhSequence s;
    s.h = j.at("h").get<int>();
    const auto method = get_or<std::string>(j, "method", "greedy");
    if (method == "greedy")
      s.method = sidon::Method::greedy;
    else if (method == "singer")
      s.method = sidon::Method::singer;
    else
      throw InvalidArgument("unknown sequence method '" + method + "'");
    s.terms = j.at("terms").get<std::vector<std::int64_t>>();
    s.complete = get_or(j, "complete", true);
    s.modulus = get_or<std::int64_t>(j, "modulus", 0);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed sequence file: ") + e.what());
  }
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_function_csv(const fs::path& path, const SampledFunction& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const auto w = f.measure().weights();
  out << "atom,weight,re,im\n";
  for (std::size_t a = 0; a < f.size(); ++a)
    out << a << ',' << fmt17(w[a]) << ',' << fmt17(f[a].real()) << ',' << fmt17(f[a].imag()) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

SampledFunction read_function_csv(const fs::path& path, const MeasurePtr& measure) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("atom,weight,re,im", 0) != 0)
    throw InvalidArgument(path.string() + ": expected header 'atom,weight,re,im'");
  const auto w = measure->weights();
  std::vector<cplx> values;
  values.reserve(measure->size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell[4];
    for (auto& c : cell)
      if (!std::getline(ls, c, ',')) throw InvalidArgument(path.string() + ": short row " + std::to_string(row + 2));
    try {
      if (std::stoull(cell[0]) != row) throw InvalidArgument(path.string() + ": atoms out of order at row " + std::to_string(row + 2));
      if (row >= w.size()) throw InvalidArgument(path.string() + ": more rows than atoms in the measure");
      const double weight = std::stod(cell[1]);
      if (std::abs(weight - w[row]) > 1e-12 * w[row])
        throw InvalidArgument(path.string() + ": weight mismatch at atom " + std::to_string(row));
      values.emplace_back(std::stod(cell[2]), std::stod(cell[3]));
    } catch (const std::logic_error&) {
      throw InvalidArgument(path.string() + ": bad number in row " + std::to_string(row + 2));
    }
    ++row;
  }
  if (values.size() != measure->size())
    throw InvalidArgument(path.string() + ": " + std::to_string(values.size()) + " rows for " +
                  std::to_string(measure->size()) + " atoms");
  return SampledFunction(measure, std::move(values));
}

Json write_basis_elements(const fs::path& manifest, const OrthoBasis& basis) {
  const auto dir = manifest.parent_path();
  const auto stem = manifest.stem().string();
  Json j;
  j["format"] = "spr-lab-basis";
  j["field"] = to_string(basis.field());
  j["measure"] = to_json(*basis.measure());
  j["provenance"] = to_json(basis.provenance());
  Json names = Json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto name = stem + "_r" + std::to_string(k + 1) + ".csv";
    write_function_csv(dir / name, basis.r(k));
    names.push_back(name);
  }
  j["elements"] = names;
  return j;
}

void write_basis(const fs::path& manifest, const OrthoBasis& basis) {
  write_text_file(manifest, dump_json(write_basis_elements(manifest, basis)));
}

OrthoBasis read_basis(const fs::path& manifest) {
  const auto j = read_json_file(manifest);
  try {
    if (j.value("format", "") != "spr-lab-basis") throw InvalidArgument(manifest.string() + " is not a basis manifest");
    const auto measure = measure_from_json(j.at("measure"));
    const auto field = field_from_string(j.at("field").get<std::string>());
    auto provenance = provenance_from_json(j.at("provenance"));
    std::vector<SampledFunction> elements;
    for (const auto& name : j.at("elements"))
      elements.push_back(read_function_csv(manifest.parent_path() / name.get<std::string>(), measure));
    return OrthoBasis(measure, std::move(elements), field, std::move(provenance));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed basis manifest " + manifest.string() + ": " + e.what());
  }
}

}  // namespace spr
