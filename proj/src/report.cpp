#include "fbasis/report.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/syntax.hpp"

#include <fstream>
#include <iostream>

namespace fbasis {

namespace {

std::string csv_field(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void flatten_leaves(const Json& v, const std::string& prefix, std::string& out) {
  if (v.is_object() && !v.empty()) {
    for (const auto& [k, item] : v.items()) flatten_leaves(item, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten_leaves(v[i], prefix + "." + std::to_string(i), out);
  } else {
    out += csv_field(Json(prefix)) + "," + csv_field(v) + "\n";
  }
}

Json opt_set(const std::optional<SetExpr>& s) { return s ? Json(to_text(*s)) : Json(nullptr); }

Json steps_json(const std::vector<LimitVerdict::Step>& steps) {
  Json out = Json::array();
  for (const auto& s : steps) {
    out.push_back({{"eps", num(s.eps)}, {"exceptional", to_text(s.exceptional)}, {"class", to_string(s.verdict)}});
  }
  return out;
}

Json scalars(const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(num(s));
  return out;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw ParseError("unknown format '" + std::string(text) + "'", 0, {"json", "csv"});
}

std::string emit_report(const Json& doc, Format format) {
  if (format == Format::Json) return doc.dump(2) + "\n";
  std::string out;
  if (doc.contains("table")) {
    const Json& table = doc["table"];
    bool first = true;
    for (const auto& c : table["columns"]) {
      out += (first ? "" : ",") + csv_field(c);
      first = false;
    }
    out += "\n";
    for (const auto& row : table["rows"]) {
      first = true;
      for (const auto& cell : row) {
        out += (first ? "" : ",") + csv_field(cell);
        first = false;
      }
      out += "\n";
    }
    return out;
  }
  out = "key,value\n";
  flatten_leaves(doc, "", out);
  return out;
}

void write_output(const std::string& bytes, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    if (!std::cout) throw IoError("could not write to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("could not open " + path);
  f << bytes;
  if (!f) throw IoError("could not write " + path);
}

Json num(double v) { return format_double(v); }
Json num(const Rational& r) { return to_string(r); }
Json num(const Scalar& s) { return s.to_string(); }

Json to_json(const DensityVerdict& v) {
  Json out{{"kind", to_string(v.kind)}};
  if (v.kind == DensityVerdict::Kind::Inconclusive) {
    out["horizon"] = v.horizon;
    out["observed"] = num(v.observed);
  } else {
    out["lower"] = num(v.lower);
    out["upper"] = num(v.upper);
  }
  return out;
}

Json to_json(const SumVerdict& v) {
  Json out{{"kind", to_string(v.kind)}, {"rule", v.rule}};
  if (v.kind == SumVerdict::Kind::Converges) out["bound"] = num(v.bound);
  if (v.kind != SumVerdict::Kind::Converges) {
    out["partial"] = num(v.partial);
    out["horizon"] = v.horizon;
  }
  return out;
}

Json to_json(const AdmissVerdict& v) {
  Json out{{"kind", to_string(v.kind)}, {"criterion", v.criterion}, {"witness", opt_set(v.witness)}};
  if (v.witness) out["witness_class"] = v.witness_class;
  if (v.inverse_sum_certificate) out["inverse_sum_certificate"] = to_json(*v.inverse_sum_certificate);
  out["caveats"] = v.caveats;
  return out;
}

Json to_json(const BandReport& r) {
  Json nec = Json::array();
  for (const auto& [p, v] : r.necessary) nec.push_back({{"p", num(p)}, {"verdict", to_json(v)}});
  return {{"p", num(r.p)}, {"sufficient", to_json(r.sufficient)}, {"necessary", nec}};
}

Json to_json(const SlowVerdict& v) {
  return {{"kind", to_string(v.kind)}, {"rule", v.rule}, {"witness", v.witness ? Json(to_text(*v.witness)) : Json(nullptr)}};
}

Json to_json(const DomVerdict& v) {
  return {{"kind", to_string(v.kind)}, {"rule", v.rule}, {"witness", opt_set(v.witness)}};
}

Json to_json(const LimitVerdict& v) {
  Json out{{"kind", to_string(v.kind)}, {"target", num(v.target)}};
  if (v.kind == LimitVerdict::Kind::DoesNotConverge) out["eps"] = num(v.eps);
  out["steps"] = steps_json(v.steps);
  return out;
}

Json to_json(const NormReport& r) {
  return {{"value", num(r.value)}, {"method", to_string(r.method)}, {"lower", num(r.lower)}, {"upper", num(r.upper)}};
}

Json to_json(const GreedyBlocks& g) {
  Json blocks = Json::array();
  for (const auto& b : g.blocks) {
    Json runs = Json::array();
    for (const auto& [lo, hi] : b.runs) runs.push_back({lo, hi});
    blocks.push_back({{"runs", runs}, {"weight_sum", num(b.weight_sum)}, {"inverse_sum", num(b.inverse_sum)}});
  }
  return {{"sequence", to_text(g.sequence)},
          {"weights", to_text(g.weights)},
          {"p", num(g.exponent)},
          {"horizon", g.horizon},
          {"scanned_to", g.scanned_to},
          {"certified_infinite", g.certified_infinite},
          {"total_inverse_sum", num(g.total_inverse_sum())},
          {"blocks", blocks}};
}

Json to_json(const BasisSystem& sys) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < sys.stages.size(); ++i) {
    stages.push_back({{"n", i + 1},
                      {"a_n", num(eval_at(sys.target, i + 1))},
                      {"b_next", num(sys.coefficients[i + 1])},
                      {"norm", to_json(sys.norms[i])},
                      {"c_n", num(sys.defect_coeffs[i])}});
  }
  return {{"space", sys.space.name()},
          {"target", to_text(sys.target)},
          {"filter", to_text(sys.filter)},
          {"gate_p", num(sys.gate_p)},
          {"gate", to_json(sys.gate)},
          {"coefficients", scalars(sys.coefficients)},
          {"stages", stages},
          {"caveats", sys.caveats},
          {"failures", sys.failures}};
}

Json to_json(const BiorthogonalityReport& r) {
  return {{"ok", r.ok}, {"exact", r.exact}, {"max_error", num(r.max_error)}, {"size", r.gram.size()}};
}

Json to_json(const DefectReport& r) {
  Json gap = Json::array();
  for (double g : r.gap) gap.push_back(num(g));
  return {{"c", scalars(r.c)},
          {"gap", gap},
          {"bound_ok", r.bound_ok},
          {"equals_target", r.equals_target},
          {"majorant", to_text(r.majorant)},
          {"family_verdict", to_string(r.family_verdict)}};
}

Json to_json(const ConvergenceReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json item{{"filter", v.filter}, {"verdict", to_string(v.verdict)}};
    if (v.verdict == LimitVerdict::Kind::DoesNotConverge) item["failing_eps"] = num(v.failing_eps);
    item["steps"] = steps_json(v.steps);
    verdicts.push_back(item);
  }
  return {{"vector", r.vector},
          {"defects", scalars(r.defects)},
          {"exact_sets", r.exact_sets},
          {"verdicts", verdicts},
          {"caveats", r.caveats}};
}

Json to_json(const PlankSeparator& s) {
  return {{"dual", to_string(s.dual)},
          {"eps", num(s.eps)},
          {"x", to_text(s.x)},
          {"product", to_text(s.product)},
          {"identity_holds", s.identity_holds},
          {"norm_bound", num(s.norm_bound)},
          {"sum", to_json(s.sum)}};
}

Json to_json(const ClusterWitness& w) {
  Json maxima = Json::array();
  for (double m : w.maxima) maxima.push_back(num(m));
  Json out{{"found", w.found}};
  if (w.found) {
    out["m"] = w.m;
  } else {
    out["running_min"] = num(w.running_min);
    out["running_min_at"] = w.running_min_at;
  }
  out["maxima"] = maxima;
  out["horizon"] = w.horizon;
  out["regime"] = to_json(w.regime);
  return out;
}

Json to_json(const Lemma1Profile& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) rows.push_back({r.n, num(r.A), num(r.B)});
  return {{"bound_holds", p.bound_holds},
          {"b_decreasing", p.b_decreasing},
          {"table", {{"columns", {"n", "A", "B"}}, {"rows", rows}}}};
}

Json to_json(const std::vector<LiftedOperator>& ops) {
  Json out = Json::array();
  for (const auto& op : ops) {
    out.push_back({{"n", op.n}, {"anchor", op.anchor}, {"coefficient", num(op.functional[op.n - 1])}, {"norm", num(op.norm)}});
  }
  return out;
}

Json to_json(const std::vector<ExtractedFunctional>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) {
    out.push_back({{"n", f.n},
                   {"functional", scalars(f.functional)},
                   {"norm", num(f.norm)},
                   {"op_norm", num(f.op_norm)},
                   {"worst_ratio", num(f.worst_ratio)},
                   {"ok", f.ok}});
  }
  return out;
}

}  // namespace fbasis
