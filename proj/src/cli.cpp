#include "jumpcop/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

namespace jumpcop {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"jumpcop: a connection tableau prover with constraint learning"};

  std::string problem_path;
  std::string include_dir;
  std::string mode = "learning";
  std::string start = "conjecture-first";
  double time_budget = 10.0;
  uint32_t depth = 0;
  bool show_proof = false;
  bool show_stats = false;
  bool dump_constraints = false;

  app.add_option("problem", problem_path, "TPTP CNF problem file")->required();
  app.add_option("--include-dir", include_dir, "directory for include() resolution");
  app.add_option("--time", time_budget, "time budget in seconds")
      ->check(CLI::PositiveNumber)
      ->default_val(10.0);
  app.add_option("--depth", depth, "maximum depth limit (default: unbounded)");
  app.add_option("--mode", mode, "search mode")
      ->check(CLI::IsMember({"learning", "chronological"}))
      ->default_val("learning");
  app.add_option("--start", start, "start clause policy")
      ->check(CLI::IsMember({"conjecture-first", "all"}))
      ->default_val("conjecture-first");
  app.add_flag("--proof", show_proof, "print the proof in SZS output form");
  app.add_flag("--stats", show_stats, "print per-level statistics as JSON lines");
  app.add_flag("--dump-constraints", dump_constraints, "print each learned constraint");

  std::vector<const char*> argv;
  argv.push_back("jumpcop");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  ParseResult parsed = parse_problem(problem_path,
                                     include_dir.empty() ? std::nullopt
                                                         : std::optional<std::string>(include_dir));
  if (auto* diag = std::get_if<ParseDiagnostic>(&parsed)) {
    err << "error: " << diag->to_string() << "\n";
    return 2;
  }
  Problem problem = std::move(std::get<Problem>(parsed));

  SearchOptions options;
  options.time_budget_s = time_budget;
  if (depth > 0) options.max_depth = depth;
  options.mode = mode == "learning" ? SearchMode::Learning : SearchMode::Chronological;
  options.start = start == "all" ? StartPolicy::All : StartPolicy::ConjectureFirst;
  if (dump_constraints) {
    options.on_learn = [&](uint32_t level, std::span<const Atom> atoms) {
      out << "% constraint level=" << level << ":";
      for (Atom a : atoms) out << " " << show_atom(problem.ctx, a);
      out << "\n";
    };
  }

  Outcome outcome = prove(problem, options);

  out << "% SZS status " << outcome_szs(outcome.kind) << "\n";
  if (show_proof && outcome.kind == Outcome::Kind::Theorem) {
    out << "% SZS output start Proof\n";
    out << format_proof(problem, *outcome.proof);
    out << "% SZS output end Proof\n";
  }
  if (show_stats)
    for (const LevelStats& s : outcome.stats) out << stats_to_json(s) << "\n";

  return outcome.kind == Outcome::Kind::Theorem || outcome.kind == Outcome::Kind::Saturated ? 0
                                                                                            : 1;
}

}  // namespace jumpcop
