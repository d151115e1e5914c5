#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mg/cli.hpp"
#include "mg/corpus.hpp"
#include "mg/descent.hpp"
#include "mg/errors.hpp"
#include "mg/metagrammar.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"
#include "mg/solver.hpp"

namespace py = pybind11;
using namespace mg;

namespace {

py::dict outcome_dict(const SolveOutcome& o) {
  py::dict d;
  d["status"] = to_string(o.status);
  d["solution"] = o.solution ? py::cast(print_term(*o.solution)) : py::none();
  d["message"] = o.message;
  d["runtime_seconds"] = o.runtime_seconds;
  d["cost"] = o.cost;
  return d;
}

py::dict meta_dict(const BenchmarkMeta& m) {
  py::dict d;
  d["id"] = m.id;
  d["path"] = m.path;
  d["category"] = m.category;
  d["parse_status"] = to_string(m.parse_status);
  d["message"] = m.message;
  return d;
}

std::vector<BenchmarkMeta> metas_from(const py::list& items) {
  std::vector<BenchmarkMeta> out;
  for (const auto& item : items) {
    const auto d = item.cast<py::dict>();
    BenchmarkMeta m;
    m.id = d["id"].cast<std::string>();
    m.path = d["path"].cast<std::string>();
    m.category = d["category"].cast<std::string>();
    const auto status = d.contains("parse_status") ? d["parse_status"].cast<std::string>() : "ok";
    m.parse_status = status == "ok" ? ParseStatus::Ok : status == "unsupported" ? ParseStatus::Unsupported
                                                                                : ParseStatus::Error;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mgsynth, m) {
  m.doc() = "Metagrammar descent for syntax-guided synthesis";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_ValueError);
  py::register_exception<MaterializeError>(m, "MaterializeError", PyExc_ValueError);

  py::class_<SynthProblem>(m, "Problem")
      .def_property_readonly("logic", [](const SynthProblem& p) { return p.logic; })
      .def_property_readonly("target", [](const SynthProblem& p) { return p.target.name; })
      .def_property_readonly("params",
                             [](const SynthProblem& p) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const auto& q : p.target.params) out.emplace_back(q.name, print_sort(q.sort));
                               return out;
                             })
      .def_property_readonly("return_sort", [](const SynthProblem& p) { return print_sort(p.target.return_sort); })
      .def_property_readonly("constraint_count", [](const SynthProblem& p) { return p.constraints.size(); })
      .def_property_readonly("has_grammar", [](const SynthProblem& p) { return p.attached_grammar.has_value(); })
      .def("__eq__", [](const SynthProblem& a, const SynthProblem& b) { return a == b; })
      .def("__str__", [](const SynthProblem& p) { return print_problem(p); });

  py::class_<Grammar>(m, "Grammar")
      .def_property_readonly("nonterminals",
                             [](const Grammar& g) {
                               std::vector<std::string> out;
                               for (const auto& nt : g.nonterminals()) out.push_back(nt.name);
                               return out;
                             })
      .def("productions",
           [](const Grammar& g, const std::string& nt) {
             const Nonterminal* n = g.find(nt);
             if (n == nullptr) throw py::key_error(nt);
             std::vector<std::string> out;
             for (const auto& p : n->productions) out.push_back(print_production(p));
             return out;
           })
      .def("__str__", [](const Grammar& g) { return print_grammar(g); });

  py::class_<Metagrammar>(m, "Metagrammar")
      .def_property_readonly("id", &Metagrammar::id)
      .def_property_readonly("rule_ids", &Metagrammar::rule_ids)
      .def_property_readonly("digest", &Metagrammar::digest)
      .def("__len__", &Metagrammar::size)
      .def("__contains__", [](const Metagrammar& mg, const std::string& id) { return mg.contains(id); })
      .def("__eq__", [](const Metagrammar& a, const Metagrammar& b) { return a == b; })
      .def("__str__", [](const Metagrammar& mg) { return serialize_metagrammar(mg); });

  m.def("parse_problem", [](const std::string& text) { return parse_problem(text); }, py::arg("text"));
  m.def("print_problem", &print_problem, py::arg("problem"));
  m.def(
      "default_metagrammar", [](const SynthProblem& p) { return default_metagrammar(p.signature_sorts()); },
      py::arg("problem"));
  m.def(
      "enhanced_metagrammar", [](const SynthProblem& p) { return enhanced_metagrammar(p.signature_sorts()); },
      py::arg("problem"));
  m.def("parse_metagrammar", [](const std::string& text) { return parse_metagrammar(text); }, py::arg("text"));
  m.def("materialize", &materialize, py::arg("metagrammar"), py::arg("problem"));
  m.def("neighbors", &neighbors, py::arg("metagrammar"));
  m.def(
      "emit",
      [](const SynthProblem& p, const Metagrammar& mg) { return print_problem(p.with_grammar(materialize(mg, p))); },
      py::arg("problem"), py::arg("metagrammar"));

  m.def(
      "solve",
      [](const SynthProblem& p, const Grammar& g, std::size_t max_size, std::uint64_t max_candidates,
         double timeout) {
        RunLimits limits;
        limits.timeout_seconds = timeout;
        SolveOutcome o;
        {
          py::gil_scoped_release release;
          o = solve(p, g, SolverSpec::builtin(max_size, max_candidates), limits);
        }
        return outcome_dict(o);
      },
      py::arg("problem"), py::arg("grammar"), py::arg("max_size") = 8, py::arg("max_candidates") = 2'000'000,
      py::arg("timeout") = 300.0);
  m.def(
      "verify",
      [](const SynthProblem& p, const std::string& solution) {
        const VerifyResult r = verify(parse_term(solution, p, p.target.params), p);
        py::dict cex;
        for (const auto& [name, v] : r.counterexample) cex[py::str(name)] = v.bits;
        return py::make_tuple(r.ok, cex);
      },
      py::arg("problem"), py::arg("solution"));

  m.def(
      "score_benchmark",
      [](const std::string& id, const std::vector<std::tuple<std::string, bool, double>>& members, double penalty) {
        std::vector<ComparisonMember> ms;
        for (const auto& [mid, solved, runtime] : members) ms.push_back({mid, solved, runtime});
        return score_benchmark(id, ScoreContext::build("", std::move(ms)), penalty);
      },
      py::arg("metagrammar_id"), py::arg("members"), py::arg("penalty") = 10.0);
  m.def(
      "score_metagrammar",
      [](const std::vector<double>& scores, const std::string& aggregate) {
        return score_metagrammar(scores, aggregate_from_string(aggregate));
      },
      py::arg("scores"), py::arg("aggregate") = "sum");

  m.def(
      "scan_corpus",
      [](const std::filesystem::path& root, const std::optional<std::filesystem::path>& manifest) {
        py::list out;
        for (const auto& meta : scan_corpus(root, manifest ? load_manifest(*manifest) : Manifest{})) {
          out.append(meta_dict(meta));
        }
        return out;
      },
      py::arg("root"), py::arg("manifest") = py::none());
  m.def(
      "stratified_sample",
      [](const py::list& metas, std::size_t per_category, std::uint64_t seed) {
        const Split s = stratified_sample(metas_from(metas), per_category, seed);
        py::list training, holdout;
        for (const auto& x : s.training) training.append(meta_dict(x));
        for (const auto& x : s.holdout) holdout.append(meta_dict(x));
        return py::make_tuple(training, holdout, s.warnings);
      },
      py::arg("metas"), py::arg("per_category"), py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
