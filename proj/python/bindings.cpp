#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jumpcop/calculus.hpp"
#include "jumpcop/cli.hpp"
#include "jumpcop/search.hpp"

namespace py = pybind11;
using namespace jumpcop;

namespace {

Problem load(const std::string& path, const std::optional<std::string>& include_dir) {
  ParseResult r = parse_problem(path, include_dir);
  if (auto* diag = std::get_if<ParseDiagnostic>(&r)) throw py::value_error(diag->to_string());
  return std::move(std::get<Problem>(r));
}

Problem load_string(const std::string& text, const std::string& name) {
  ParseResult r = parse_problem_string(text, name);
  if (auto* diag = std::get_if<ParseDiagnostic>(&r)) throw py::value_error(diag->to_string());
  return std::move(std::get<Problem>(r));
}

SearchOptions make_options(double time_budget, std::optional<uint32_t> depth,
                           const std::string& mode, const std::string& start) {
  SearchOptions options;
  options.time_budget_s = time_budget;
  options.max_depth = depth;
  if (mode == "learning") options.mode = SearchMode::Learning;
  else if (mode == "chronological") options.mode = SearchMode::Chronological;
  else throw py::value_error("mode must be 'learning' or 'chronological'");
  if (start == "conjecture-first") options.start = StartPolicy::ConjectureFirst;
  else if (start == "all") options.start = StartPolicy::All;
  else throw py::value_error("start must be 'conjecture-first' or 'all'");
  return options;
}

py::dict stats_dict(const LevelStats& s) {
  py::dict d;
  d["level"] = s.level;
  d["extensions_applied"] = s.extensions_applied;
  d["extensions_tried"] = s.extensions_tried;
  d["reductions_applied"] = s.reductions_applied;
  d["constraints_learned"] = s.constraints_learned;
  d["conflicts_hit"] = s.conflicts_hit;
  d["max_trail_depth"] = s.max_trail_depth;
  d["backjump_frame_total"] = s.backjump_frame_total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Connection tableau prover with constraint-learning backjumping";

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("origin", [](const Problem& p) { return p.origin; })
      .def("__len__", [](const Problem& p) { return p.clauses.size(); })
      .def("clause_names",
           [](const Problem& p) {
             std::vector<std::string> names;
             for (const Clause& c : p.clauses) names.push_back(c.name);
             return names;
           })
      .def("__repr__", [](const Problem& p) {
        std::ostringstream os;
        os << "Problem(" << p.origin << ", " << p.clauses.size() << " clauses)";
        return os.str();
      });

  m.def("parse_problem", &load, py::arg("path"), py::arg("include_dir") = std::nullopt,
        "Parse a TPTP CNF problem file.");
  m.def("parse_problem_string", &load_string, py::arg("text"), py::arg("name") = "<string>",
        "Parse a TPTP CNF problem from a string.");
  m.def("print_problem", &print_problem, py::arg("problem"),
        "Render the problem back as TPTP CNF text.");
  m.def(
      "select_start_clauses",
      [](const Problem& p, const std::string& policy) {
        StartPolicy sp = policy == "all" ? StartPolicy::All : StartPolicy::ConjectureFirst;
        std::vector<std::string> names;
        for (uint32_t i : select_start_clauses(p, sp)) names.push_back(p.clauses[i].name);
        return names;
      },
      py::arg("problem"), py::arg("policy") = "conjecture-first");

  m.def(
      "prove",
      [](Problem& problem, double time_budget, std::optional<uint32_t> depth,
         const std::string& mode, const std::string& start) {
        SearchOptions options = make_options(time_budget, depth, mode, start);
        Outcome outcome;
        {
          py::gil_scoped_release release;
          outcome = prove(problem, options);
        }
        py::dict d;
        d["status"] = std::string(outcome_szs(outcome.kind));
        d["depth"] = outcome.depth;
        py::list stats;
        for (const LevelStats& s : outcome.stats) stats.append(stats_dict(s));
        d["stats"] = stats;
        d["proof"] = outcome.proof ? py::object(py::str(format_proof(problem, *outcome.proof)))
                                   : py::object(py::none());
        return d;
      },
      py::arg("problem"), py::arg("time") = 10.0, py::arg("depth") = std::nullopt,
      py::arg("mode") = "learning", py::arg("start") = "conjecture-first",
      "Run iterative-deepening proof search; returns status, depth, stats and proof.");

  m.def(
      "run_level",
      [](Problem& problem, uint32_t limit, const std::string& mode, const std::string& start) {
        SearchOptions options = make_options(1e9, std::nullopt, mode, start);
        LevelResult r;
        {
          py::gil_scoped_release release;
          r = run_level(problem, limit, options);
        }
        py::dict d;
        d["closed"] = r.kind == LevelResult::Kind::Closed;
        d["limit_hit"] = r.limit_hit;
        d["stats"] = stats_dict(r.stats);
        d["proof"] = r.proof ? py::object(py::str(format_proof(problem, *r.proof)))
                             : py::object(py::none());
        return d;
      },
      py::arg("problem"), py::arg("limit"), py::arg("mode") = "learning",
      py::arg("start") = "conjecture-first", "Run a single depth level.");

  m.def(
      "check_proof",
      [](Problem& problem, const std::string& proof_text, uint32_t limit) {
        auto proof = parse_proof(problem, proof_text);
        if (!proof) throw py::value_error("unparsable proof text");
        CheckResult r = check_proof(problem, *proof, limit);
        return py::make_tuple(r.ok, r.message);
      },
      py::arg("problem"), py::arg("proof"), py::arg("limit"),
      "Replay a printed proof through the independent checker.");

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line interface; returns (exit_code, stdout, stderr).");
}
