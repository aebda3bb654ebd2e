#include "spr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spr/errors.hpp"

#ifndef SPR_LAB_VERSION
#define SPR_LAB_VERSION "0.0.0"
#endif

namespace spr {
namespace {

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_into(value, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric rows stay on one line: [re, im] pairs and support points.
      const bool inline_row =
          j.size() <= 3 && std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_number(); });
      if (inline_row) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: out += format_number(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json pair_json(std::pair<std::size_t, std::size_t> p) { return Json::array({p.first + 1, p.second + 1}); }

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognizable as floats when they happen to be integral.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

Json report_envelope(const Json& body) {
  Json j;
  j["tool"] = "spr-lab";
  j["version"] = SPR_LAB_VERSION;
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j;
}

void emit_report(const Json& report, const std::filesystem::path& path) { write_text_file(path, dump_json(report)); }

Json to_json(const OrthogonalityCheck& c, Field field) {
  Json j;
  j["max_violation"] = c.max_violation;
  if (c.witness) {
    j["witness"] = Json::array({c.witness->first.label(field), c.witness->second.label(field)});
    j["witness_value"] = to_json(c.witness_value);
    j["witness_abs"] = std::abs(c.witness_value);
  } else {
    j["witness"] = nullptr;
  }
  j["family_size"] = c.family_size;
  j["pairs_checked"] = c.pairs_checked;
  j["subsampled"] = c.subsampled;
  j["passed"] = c.passed;
  return j;
}

Json to_json(const MomentCheck& m) {
  Json j;
  j["sup_l4"] = m.sup_l4;
  j["sup_l4_index"] = m.sup_l4_index + 1;
  j["delta"] = m.delta;
  j["min_s_norm_sq"] = m.min_s_norm_sq;
  j["min_s_index"] = m.min_s_index + 1;
  j["min_product_norm_sq"] = opt(m.min_product_norm_sq);
  j["min_product_pair"] = m.min_product_norm_sq ? pair_json(m.min_product_pair) : Json(nullptr);
  j["s_norm_sq"] = m.s_norm_sq;
  j["s_norm_sq_via_l4"] = m.s_norm_sq_via_l4;
  j["subsampled"] = m.subsampled;
  j["h2_passed"] = m.h2_passed;
  j["h3_passed"] = m.h3_passed;
  return j;
}

Json to_json(const HypothesisReport& r) {
  Json j;
  j["field"] = to_string(r.field);
  j["verdict"] = to_string(r.verdict);
  j["orthogonality"] = to_json(r.orthogonality, r.field);
  j["moments"] = to_json(r.moments);
  j["delta"] = r.h3_delta();
  return j;
}

Json to_json(const EmbeddingEstimate& e) {
  Json j;
  j["p"] = e.p;
  j["constant"] = e.constant;
  j["label"] = "empirical lower bound";
  j["trials"] = e.trials;
  j["probes"] = e.probes;
  j["argmax_coeffs"] = to_json(e.argmax_coeffs);
  return j;
}

Json to_json(const RecoveryResult& r) {
  Json j;
  j["coeffs"] = to_json(r.coeffs);
  j["anchor"] = r.anchor_index + 1;
  j["residual"] = r.residual;
  j["consistency_gap"] = r.consistency_gap;
  j["diagonal_reads"] = r.diagonal_reads;
  Json flags;
  flags["zero_function"] = r.flags.zero_function;
  flags["weak_anchor"] = r.flags.weak_anchor;
  flags["model_mismatch"] = r.flags.model_mismatch;
  flags["sign_ambiguity"] = r.flags.sign_ambiguity;
  j["flags"] = flags;
  Json alts = Json::array();
  for (std::size_t k = 0; k < r.alternatives.size(); ++k)
    alts.push_back({{"coeffs", to_json(r.alternatives[k])}, {"residual", r.alternative_residuals[k]}});
  j["alternatives"] = alts;
  return j;
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["p"] = r.p;
  j["sup_ratio"] = r.sup_ratio;
  j["argmax_pair"] = {{"a", to_json(r.argmax_pair.first)}, {"b", to_json(r.argmax_pair.second)}};
  j["argmax_source"] = r.argmax_source;
  j["trials"] = r.trials;
  j["probes"] = r.probes;
  j["evaluated"] = r.evaluated;
  j["skipped"] = r.skipped;
  j["gamma_fit"] = opt(r.gamma_fit);
  j["violation_count"] = r.violation_count;
  Json vs = Json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"a", to_json(v.a)},
                  {"b", to_json(v.b)},
                  {"numerator", v.numerator},
                  {"denominator", v.denominator},
                  {"source", v.source}});
  j["violations"] = vs;
  j["spr_consistent"] = r.spr_consistent();
  j["delta"] = opt(r.delta);
  j["embedding_constant"] = opt(r.embedding_constant);
  j["theoretical_bound"] = opt(r.theoretical_bound);
  if (r.theoretical_bound) j["bound_label"] = r.bound_label;
  if (!r.restart_best.empty()) j["restart_best"] = r.restart_best;
  return j;
}

Json to_json(const HolderFit& h) {
  Json j;
  j["gamma"] = h.gamma;
  j["decades"] = h.decades;
  j["points"] = h.points;
  j["groups"] = h.groups;
  return j;
}

Json to_json(const IdentityResiduals& r) {
  Json j;
  j["scale"] = r.scale;
  j["i"] = {{"lhs", r.lhs_i}, {"rhs", r.rhs_i}, {"residual", r.residual_i}};
  j["ii"] = {{"lhs", r.lhs_ii}, {"rhs", r.rhs_ii}, {"residual", r.residual_ii}};
  j["iii"] = {{"lhs", r.lhs_iii}, {"rhs", r.rhs_iii}, {"margin", r.margin_iii}, {"holds", r.inequality_holds}};
  if (r.residual_iv) j["iv"] = {{"lhs", *r.lhs_iv}, {"rhs", *r.rhs_iv}, {"residual", *r.residual_iv}};
  return j;
}

Json to_json(const BoundCheck& b) {
  Json j;
  j["r"] = b.r;
  j["h_norm_sq"] = b.h_norm_sq;
  j["lhs_l2_sq"] = b.lhs_l2_sq;
  j["rhs_l2_sq"] = b.rhs_l2_sq;
  j["lhs_l4"] = b.lhs_l4;
  j["rhs_l4"] = b.rhs_l4;
  j["margin_l2"] = b.margin_l2;
  j["margin_l4"] = b.margin_l4;
  j["identity_residual"] = b.identity_residual;
  j["constant_used"] = b.constant_used;
  j["anomaly"] = b.anomaly;
  return j;
}

Json to_json(const sidon::Verdict& v) {
  Json j;
  j["ok"] = v.ok;
  if (v.witness) {
    j["witness"] = {{"first", v.witness->first}, {"second", v.witness->second}, {"sum", v.witness->sum}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const sidon::DensityProfile& d) {
  Json j;
  Json table = Json::array();
  for (auto [n, a] : d.table) table.push_back(Json::array({n, a}));
  j["table"] = table;
  j["fitted_exponent"] = d.fitted_exponent;
  return j;
}

}  // namespace spr
