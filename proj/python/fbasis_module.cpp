#include "fbasis/admissibility.hpp"
#include "fbasis/basis_builder.hpp"
#include "fbasis/cli.hpp"
#include "fbasis/errors.hpp"
#include "fbasis/filters.hpp"
#include "fbasis/lp_operators.hpp"
#include "fbasis/report.hpp"
#include "fbasis/separation.hpp"
#include "fbasis/syntax.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fbasis;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Settings settings_for(std::uint64_t horizon) {
  Settings s;
  s.horizon = horizon;
  return s;
}

Rational rational_arg(const std::string& text) {
  const Scalar s = parse_number(text);
  if (!s.is_rational()) throw DomainError("expected a rational number, got " + text);
  return *s.rational();
}

std::vector<Scalar> scalars_arg(const std::vector<std::string>& texts) {
  std::vector<Scalar> out;
  for (const auto& t : texts) out.push_back(parse_number(t));
  return out;
}

std::vector<TestVector> vectors_arg(const std::vector<std::string>& texts) {
  std::vector<TestVector> out;
  for (const auto& t : texts) out.push_back(parse_test_vector(t));
  return out;
}

constexpr std::uint64_t kHorizon = 1'000'000;

}  // namespace

PYBIND11_MODULE(_fbasis, m) {
  m.doc() = "Filter bases, admissibility verdicts and separation certificates";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  (void)error;

  m.def("parse_set", [](const std::string& text) { return to_text(parse_set_expr(text)); },
        "Canonical text of a set expression.", py::arg("text"));
  m.def("parse_seq", [](const std::string& text) { return to_text(parse_seq(text)); },
        "Canonical text of a sequence expression.", py::arg("text"));
  m.def("parse_filter", [](const std::string& text) { return to_text(parse_filter(text)); },
        "Canonical text of a filter expression.", py::arg("text"));

  m.def(
      "member",
      [](std::uint64_t n, const std::string& set) -> std::optional<bool> {
        const Tri t = member(n, parse_set_expr(set));
        if (t == Tri::Unknown) return std::nullopt;
        return t == Tri::True;
      },
      "Membership of n; None when undecided.", py::arg("n"), py::arg("set"));
  m.def(
      "enumerate_prefix",
      [](const std::string& set, std::uint64_t N) { return enumerate_prefix(parse_set_expr(set), N); },
      py::arg("set"), py::arg("N"));
  m.def(
      "natural_density", [](const std::string& set) { return to_py(to_json(natural_density(parse_set_expr(set)))); },
      py::arg("set"));
  m.def(
      "weight_sum",
      [](const std::string& set, const std::string& w, std::uint64_t horizon) {
        return to_py(to_json(weight_sum(parse_set_expr(set), parse_seq(w), settings_for(horizon))));
      },
      py::arg("set"), py::arg("weights"), py::arg("horizon") = kHorizon);

  m.def(
      "check_admissible",
      [](const std::string& seq, const std::string& filter, const std::string& p, std::uint64_t horizon) {
        const Settings st = settings_for(horizon);
        return to_py(to_json(check_admissible(parse_seq(seq), parse_filter(filter, st), rational_arg(p), st)));
      },
      py::arg("seq"), py::arg("filter") = "frechet", py::arg("p") = "1", py::arg("horizon") = kHorizon);
  m.def(
      "classify_set",
      [](const std::string& set, const std::string& filter, std::uint64_t horizon) {
        const Settings st = settings_for(horizon);
        return to_string(classify_set(parse_set_expr(set), parse_filter(filter, st), st));
      },
      py::arg("set"), py::arg("filter"), py::arg("horizon") = kHorizon);
  m.def(
      "dominates",
      [](const std::string& f1, const std::string& f2, std::uint64_t horizon) {
        const Settings st = settings_for(horizon);
        return to_py(to_json(dominates(parse_filter(f1, st), parse_filter(f2, st), st)));
      },
      py::arg("filter"), py::arg("other"), py::arg("horizon") = kHorizon);

  m.def(
      "op_norm",
      [](const std::vector<std::string>& b, std::size_t n, const std::string& space, const std::string& p) {
        return to_py(to_json(op_norm(TailOp(n, scalars_arg(b), parse_space(space, p)))));
      },
      "Norm of the stage-n operator built from b_1..b_{n+1}.", py::arg("b"), py::arg("n"),
      py::arg("space") = "l1", py::arg("p") = "2");
  m.def(
      "remainder_norm",
      [](const std::vector<std::string>& b, std::size_t n, const std::string& space, const std::string& p) {
        return to_py(to_json(remainder_norm(TailOp(n, scalars_arg(b), parse_space(space, p)))));
      },
      py::arg("b"), py::arg("n"), py::arg("space") = "l1", py::arg("p") = "2");
  m.def(
      "solve_b_next",
      [](const std::vector<std::string>& b, const std::string& a, const std::string& space, const std::string& p) {
        return solve_b_next(scalars_arg(b), parse_number(a), parse_space(space, p)).to_string();
      },
      py::arg("b"), py::arg("a"), py::arg("space") = "l1", py::arg("p") = "2");

  m.def(
      "build_basis",
      [](const std::string& seq, const std::string& space, const std::string& filter, std::size_t n_max,
         const std::string& p, std::uint64_t horizon) {
        const Settings st = settings_for(horizon);
        const BasisSystem sys = build_basis(parse_seq(seq), parse_space(space, p), parse_filter(filter, st), n_max, st);
        Json out{{"system", to_json(sys)},
                 {"biorthogonality", to_json(verify_biorthogonality(sys))},
                 {"defect", to_json(defect_report(sys, st))}};
        return to_py(out);
      },
      py::arg("seq"), py::arg("space") = "l1", py::arg("filter") = "frechet", py::arg("n_max") = 32,
      py::arg("p") = "2", py::arg("horizon") = kHorizon);
  m.def(
      "convergence_demo",
      [](const std::string& seq, const std::string& space, const std::string& filter, std::size_t n_max,
         const std::string& vector, const std::string& p, std::uint64_t horizon) {
        const Settings st = settings_for(horizon);
        const BasisSystem sys = build_basis(parse_seq(seq), parse_space(space, p), parse_filter(filter, st), n_max, st);
        return to_py(to_json(convergence_demo(sys, parse_test_vector(vector), default_eps_schedule(), st)));
      },
      py::arg("seq"), py::arg("space"), py::arg("filter"), py::arg("n_max"), py::arg("vector"),
      py::arg("p") = "2", py::arg("horizon") = kHorizon);

  m.def(
      "plank_separator",
      [](const std::string& seq, const std::string& dual, const std::string& eps, std::uint64_t horizon) {
        return to_py(to_json(plank_separator(parse_seq(seq), parse_dual_kind(dual), rational_arg(eps),
                                             settings_for(horizon))));
      },
      py::arg("seq"), py::arg("dual") = "linf", py::arg("eps") = "1/10", py::arg("horizon") = kHorizon);
  m.def(
      "cluster_witness",
      [](const std::string& seq, const std::string& p, const std::vector<std::string>& vectors,
         std::uint64_t horizon) {
        return to_py(to_json(cluster_witness(parse_seq(seq), rational_arg(p), vectors_arg(vectors), horizon,
                                             settings_for(horizon))));
      },
      py::arg("seq"), py::arg("p"), py::arg("vectors"), py::arg("horizon") = kHorizon);
  m.def(
      "lemma1_profile",
      [](const std::string& seq, const std::vector<std::string>& vectors, const std::vector<std::uint64_t>& grid) {
        return to_py(to_json(lemma1_profile(parse_seq(seq), vectors_arg(vectors), grid)));
      },
      py::arg("seq"), py::arg("vectors"), py::arg("grid"));

  m.def(
      "run",
      [](const std::vector<std::string>& args) -> py::tuple {
        std::vector<const char*> argv{"fbasis"};
        for (const auto& a : args) argv.push_back(a.c_str());
        RunConfig config;
        try {
          config = parse_args(static_cast<int>(argv.size()), argv.data());
        } catch (const UsageError& e) {
          return py::make_tuple(64, std::string(), std::string(e.what()));
        }
        const RunResult r = run_command(config);
        return py::make_tuple(r.exit_code, r.report, r.message);
      },
      "Runs one CLI command; returns (exit_code, report, message).", py::arg("args"));
}
