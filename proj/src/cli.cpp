#include "fbasis/cli.hpp"

#include "fbasis/admissibility.hpp"
#include "fbasis/basis_builder.hpp"
#include "fbasis/filters.hpp"
#include "fbasis/report.hpp"
#include "fbasis/separation.hpp"
#include "fbasis/syntax.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fbasis {

namespace {

int exit_for(AdmissVerdict::Kind k) {
  switch (k) {
    case AdmissVerdict::Kind::Proved: return 0;
    case AdmissVerdict::Kind::Refuted: return 1;
    case AdmissVerdict::Kind::Inconclusive: return 2;
  }
  return 2;
}

int exit_for(DomVerdict::Kind k) {
  return k == DomVerdict::Kind::Proved ? 0 : (k == DomVerdict::Kind::Refuted ? 1 : 2);
}

int exit_for(LimitVerdict::Kind k) {
  return k == LimitVerdict::Kind::ConvergesTo ? 0 : (k == LimitVerdict::Kind::DoesNotConverge ? 1 : 2);
}

Rational parse_rational_arg(const std::string& text, const char* what) {
  const Scalar s = parse_number(text);
  if (!s.is_rational()) throw DomainError(std::string(what) + " must be rational");
  return *s.rational();
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const Rational r = parse_rational_arg(item, "grid point");
    if (denominator(r) != 1 || r < 1) throw DomainError("grid points must be positive integers");
    out.push_back(static_cast<std::uint64_t>(numerator(r)));
  }
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required flag --") + flag);
}

std::vector<TestVector> vectors_of(const RunConfig& c, const char* fallback) {
  std::vector<TestVector> out;
  for (const auto& v : c.vectors) out.push_back(parse_test_vector(v));
  if (out.empty() && fallback) out.push_back(parse_test_vector(fallback));
  return out;
}

Json error_json(const char* type, const std::exception& e) { return {{"type", type}, {"message", e.what()}}; }

struct Outcome {
  int code = 0;
  Json doc;
};

Outcome check_admissible_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  const ScalarSeq a = parse_seq(c.seq);
  const FilterSpec F = parse_filter(c.filter, st);
  const Rational p = parse_rational_arg(c.p, "p");
  const AdmissVerdict v = check_admissible(a, F, p, st);
  Outcome o;
  o.doc["inputs"] = {{"seq", to_text(a)}, {"filter", to_text(F)}, {"p", num(p)}, {"horizon", st.horizon}};
  o.doc["verdict"] = to_json(v);
  o.code = exit_for(v.kind);
  return o;
}

Outcome build_basis_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  const ScalarSeq a = parse_seq(c.seq);
  const FilterSpec F = parse_filter(c.filter, st);
  const SpaceKind space = parse_space(c.space, c.p);
  Outcome o;
  o.doc["inputs"] = {{"seq", to_text(a)}, {"space", space.name()}, {"filter", to_text(F)}, {"n_max", c.n_max},
                     {"horizon", st.horizon}, {"seed", c.seed}};
  try {
    const BasisSystem sys = build_basis(a, space, F, c.n_max, st);
    const BiorthogonalityReport bio = verify_biorthogonality(sys);
    const DefectReport def = defect_report(sys, st);
    Json sysj = to_json(sys);
    Json remainders = Json::array();
    Json brute = Json::array();
    for (const TailOp& T : sys.stages) {
      remainders.push_back(to_json(remainder_norm(TailOp(T.n(), T.b(), SpaceKind::lp(space.p)))));
      if (!space.is_l1() && !space.is_l2()) brute.push_back(to_json(op_norm_bruteforce(T, 64, c.seed)));
    }
    o.doc["system"] = sysj;
    o.doc["remainders"] = remainders;
    if (!brute.empty()) o.doc["bruteforce"] = brute;
    o.doc["biorthogonality"] = to_json(bio);
    o.doc["defect"] = to_json(def);
    if (!sys.failures.empty() || !bio.ok || !def.bound_ok) {
      o.code = 1;
    } else {
      o.code = sys.gate.kind == AdmissVerdict::Kind::Inconclusive ? 2 : 0;
    }
  } catch (const NotAdmissible& e) {
    o.doc["error"] = error_json("NotAdmissible", e);
    o.doc["witness"] = e.witness();
    o.code = 1;
  }
  return o;
}

Outcome witness_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  const ScalarSeq a = parse_seq(c.seq);
  const FilterSpec F = parse_filter(c.filter, st);
  const Rational p = parse_rational_arg(c.p, "p");
  Outcome o;
  o.doc["inputs"] = {{"seq", to_text(a)}, {"filter", to_text(F)}, {"p", num(p)}, {"horizon", st.horizon}};
  if (const auto* sf = std::get_if<SummableFilter>(&F.v)) {
    try {
      const SetExpr W = nonadmissibility_witness(a, sf->weights, p, st);
      o.doc["witness"] = to_text(W);
      if (const auto* b = std::get_if<BlocksAtom>(&W.node().v)) o.doc["blocks"] = to_json(*b->data);
      o.doc["witness_class"] = to_string(classify_set(W, F, st));
      const Tri stationary = stationarity(W, F, st);
      o.doc["stationary"] = stationary == Tri::Unknown ? Json(nullptr) : Json(stationary == Tri::True);
      o.doc["inverse_sum"] = to_json(sum_inverse_p_verdict(a, p, W, st));
      o.code = 1;
    } catch (const CriterionHolds& e) {
      o.doc["witness"] = nullptr;
      o.doc["criterion_holds"] = e.what();
      o.code = 0;
    } catch (const HorizonExceeded& e) {
      o.doc["witness"] = nullptr;
      o.doc["error"] = error_json("HorizonExceeded", e);
      o.code = 2;
    }
    return o;
  }
  const AdmissVerdict v = check_admissible(a, F, p, st);
  o.doc["witness"] = v.witness ? Json(to_text(*v.witness)) : Json(nullptr);
  o.doc["verdict"] = to_json(v);
  o.code = exit_for(v.kind);
  return o;
}

Outcome separate_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  const ScalarSeq a = parse_seq(c.seq);
  const DualKind dual = parse_dual_kind(c.dual);
  const Rational eps = parse_rational_arg(c.eps, "eps");
  const std::vector<TestVector> xs = vectors_of(c, "unit(1)");
  Outcome o;
  Json vs = Json::array();
  for (const auto& x : xs) vs.push_back(x.text());
  o.doc["inputs"] = {{"seq", to_text(a)}, {"dual", to_string(dual)}, {"eps", num(eps)}, {"vectors", vs},
                     {"horizon", st.horizon}};
  try {
    o.doc["separator"] = to_json(plank_separator(a, dual, eps, st));
    o.doc["cluster"] = nullptr;
    o.code = 0;
  } catch (const NotSeparable& e) {
    const Rational p = dual == DualKind::LinfDiagonal ? 1 : 2;
    o.doc["separator"] = nullptr;
    o.doc["reason"] = e.what();
    o.doc["cluster"] = to_json(cluster_witness(a, p, xs, st.horizon, st));
    o.code = 1;
  }
  return o;
}

Outcome classify_set_cmd(const RunConfig& c, const Settings& st) {
  require(c.set, "set");
  const SetExpr A = parse_set_expr(c.set);
  const FilterSpec F = parse_filter(c.filter, st);
  const SetClass cls = classify_set(A, F, st);
  Outcome o;
  o.doc["inputs"] = {{"set", to_text(A)}, {"filter", to_text(F)}, {"horizon", st.horizon}};
  o.doc["class"] = to_string(cls);
  o.doc["density"] = to_json(natural_density(A));
  o.code = cls == SetClass::Inconclusive ? 2 : 0;
  return o;
}

Outcome demo_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  if (c.vectors.empty()) throw UsageError("missing required flag --vector");
  const ScalarSeq a = parse_seq(c.seq);
  const FilterSpec F = parse_filter(c.filter, st);
  const SpaceKind space = parse_space(c.space, c.p);
  const TestVector x = parse_test_vector(c.vectors.front());
  Outcome o;
  o.doc["inputs"] = {{"seq", to_text(a)}, {"space", space.name()}, {"filter", to_text(F)}, {"n_max", c.n_max},
                     {"vector", x.text()}, {"horizon", st.horizon}};
  try {
    const BasisSystem sys = build_basis(a, space, F, c.n_max, st);
    const ConvergenceReport r = convergence_demo(sys, x, default_eps_schedule(), st);
    o.doc["coefficients"] = to_json(sys)["coefficients"];
    o.doc["caveats"] = sys.caveats;
    o.doc["convergence"] = to_json(r);
    o.code = exit_for(r.verdicts.front().verdict);
  } catch (const NotAdmissible& e) {
    o.doc["error"] = error_json("NotAdmissible", e);
    o.doc["witness"] = e.witness();
    o.code = 1;
  }
  return o;
}

Outcome dominates_cmd(const RunConfig& c, const Settings& st) {
  require(c.other, "other");
  const FilterSpec F1 = parse_filter(c.filter, st);
  const FilterSpec F2 = parse_filter(c.other, st);
  const DomVerdict v = dominates(F1, F2, st);
  Outcome o;
  o.doc["inputs"] = {{"filter", to_text(F1)}, {"other", to_text(F2)}, {"horizon", st.horizon}};
  o.doc["verdict"] = to_json(v);
  o.code = exit_for(v.kind);
  return o;
}

Outcome profile_cmd(const RunConfig& c, const Settings& st) {
  require(c.seq, "seq");
  const ScalarSeq a = parse_seq(c.seq);
  const std::vector<TestVector> xs = vectors_of(c, "unit(1)");
  const std::vector<std::uint64_t> grid = parse_grid(c.grid);
  const Lemma1Profile prof = lemma1_profile(a, xs, grid, st);
  Outcome o;
  Json vs = Json::array();
  for (const auto& x : xs) vs.push_back(x.text());
  o.doc["inputs"] = {{"seq", to_text(a)}, {"vectors", vs}, {"grid", grid}};
  const Json pj = to_json(prof);
  for (const auto& [k, v] : pj.items()) o.doc[k] = v;
  o.code = prof.bound_holds && prof.b_decreasing ? 0 : 1;
  return o;
}

using Handler = Outcome (*)(const RunConfig&, const Settings&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"check-admissible", check_admissible_cmd}, {"build-basis", build_basis_cmd},
      {"witness", witness_cmd},                   {"separate", separate_cmd},
      {"classify-set", classify_set_cmd},         {"demo-convergence", demo_cmd},
      {"dominates", dominates_cmd},               {"profile-lemma1", profile_cmd}};
  return table;
}

const std::vector<std::string> kConfigKeys{"seq",  "filter", "other",  "set",    "p",   "space",
                                           "n-max", "horizon", "tol", "seed", "format", "output",
                                           "dual", "eps", "vector", "grid"};

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
  }();
  return names;
}

SpaceKind parse_space(const std::string& space, const std::string& p) {
  if (space == "l1") return SpaceKind::l1();
  if (space == "l2") return SpaceKind::l2();
  if (space == "lp") return SpaceKind::lp(parse_rational_arg(p, "p"));
  if (space.starts_with("lp(") && space.ends_with(")")) {
    return SpaceKind::lp(parse_rational_arg(space.substr(3, space.size() - 4), "p"));
  }
  throw ParseError("unknown space '" + space + "'", 0, {"l1", "l2", "lp", "lp(NUM)"});
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("could not read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  std::string config_path;
  CLI::App app{"Filter-basis workbench"};
  app.set_help_flag("-h,--help");
  std::map<std::string, CLI::Option*> opts;
  app.add_option("command", c.command, "Subcommand")->required()->check(CLI::IsMember(commands()));
  opts["seq"] = app.add_option("--seq", c.seq, "Sequence expression");
  opts["filter"] = app.add_option("--filter", c.filter, "Filter expression");
  opts["other"] = app.add_option("--other", c.other, "Second filter for dominates");
  opts["set"] = app.add_option("--set", c.set, "Set expression");
  opts["p"] = app.add_option("--p", c.p, "Exponent p");
  opts["space"] = app.add_option("--space", c.space, "l1, l2, lp or lp(NUM)");
  opts["n-max"] = app.add_option("--n-max", c.n_max, "Number of basis coefficients");
  opts["horizon"] = app.add_option("--horizon", c.horizon, "Numeric horizon");
  opts["tol"] = app.add_option("--tol", c.tol, "Relative tolerance for numeric norms");
  opts["seed"] = app.add_option("--seed", c.seed, "Random seed");
  opts["format"] = app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  opts["output"] = app.add_option("--output", c.output, "Output path (default stdout)");
  opts["dual"] = app.add_option("--dual", c.dual, "linf or l2");
  opts["eps"] = app.add_option("--eps", c.eps, "Separator margin");
  opts["vector"] = app.add_option("--vector,--vectors", c.vectors, "Test vector (repeatable)");
  opts["grid"] = app.add_option("--grid", c.grid, "Comma-separated n grid");
  app.add_option("--config", config_path, "Config file of key = value lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const bool horizon_flag = opts["horizon"]->count() > 0;
  bool horizon_config = false;
  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config(config_path)) {
      if (opts[key]->count() > 0) continue;
      try {
        if (key == "seq") c.seq = value;
        else if (key == "filter") c.filter = value;
        else if (key == "other") c.other = value;
        else if (key == "set") c.set = value;
        else if (key == "p") c.p = value;
        else if (key == "space") c.space = value;
        else if (key == "n-max") c.n_max = std::stoull(value);
        else if (key == "horizon") c.horizon = std::stoull(value), horizon_config = true;
        else if (key == "tol") c.tol = std::stod(value);
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "format") c.format = value;
        else if (key == "output") c.output = value;
        else if (key == "dual") c.dual = value;
        else if (key == "eps") c.eps = value;
        else if (key == "vector") c.vectors.push_back(value);
        else if (key == "grid") c.grid = value;
      } catch (const std::logic_error&) {
        throw UsageError("bad value for config key '" + key + "': " + value);
      }
    }
  }
  if (!horizon_flag && !horizon_config) {
    if (const char* env = std::getenv("FBASIS_HORIZON")) {
      try {
        c.horizon = std::stoull(env);
      } catch (const std::logic_error&) {
        throw UsageError(std::string("bad FBASIS_HORIZON value: ") + env);
      }
    }
  }
  if (c.format != "json" && c.format != "csv") throw UsageError("format must be json or csv");
  if (c.horizon == 0) throw UsageError("horizon must be positive");
  return c;
}

RunResult run_command(const RunConfig& config) {
  RunResult result;
  Json doc;
  doc["command"] = config.command;
  Settings st;
  st.horizon = config.horizon;
  st.numeric_tolerance = config.tol;
  const auto it = handlers().find(config.command);
  auto fail = [&](int code, const char* type, const std::exception& e) {
    doc["error"] = error_json(type, e);
    result.exit_code = code;
    result.message = e.what();
  };
  try {
    if (it == handlers().end()) throw UsageError("unknown command '" + config.command + "'");
    Outcome o = it->second(config, st);
    for (const auto& [k, v] : o.doc.items()) doc[k] = v;
    result.exit_code = o.code;
  } catch (const UsageError& e) {
    fail(64, "UsageError", e);
  } catch (const ParseError& e) {
    fail(65, "ParseError", e);
  } catch (const DomainError& e) {
    fail(65, "DomainError", e);
  } catch (const DimensionMismatch& e) {
    fail(65, "DimensionMismatch", e);
  } catch (const NotStationary& e) {
    fail(65, "NotStationary", e);
  } catch (const NotDivergent& e) {
    fail(65, "NotDivergent", e);
  } catch (const ConvergenceFailure& e) {
    fail(2, "ConvergenceFailure", e);
  } catch (const HorizonExceeded& e) {
    fail(2, "HorizonExceeded", e);
  } catch (const Undecided& e) {
    fail(2, "Undecided", e);
  }
  result.report = emit_report(doc, parse_format(config.format));
  return result;
}

int cli_main(int argc, const char* const* argv) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << "usage: fbasis COMMAND [flags]\n\ncommands:";
    for (const auto& name : commands()) std::cout << " " << name;
    std::cout << "\n\nflags: --seq --filter --other --set --p --space --n-max --horizon --tol --seed\n"
                 "       --format --output --dual --eps --vector --grid --config\n";
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "fbasis: " << e.what() << "\n";
    return 64;
  } catch (const IoError& e) {
    std::cerr << "fbasis: " << e.what() << "\n";
    return 74;
  }
  const RunResult r = run_command(config);
  if (!r.message.empty()) std::cerr << "fbasis: " << r.message << "\n";
  try {
    write_output(r.report, config.output);
  } catch (const IoError& e) {
    std::cerr << "fbasis: " << e.what() << "\n";
    return 74;
  }
  return r.exit_code;
}

}  // namespace fbasis
