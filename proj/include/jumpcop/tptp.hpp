#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jumpcop/terms.hpp"

// TPTP CNF frontend: cnf() annotated formulas, include directives, quoted
// atoms, % and /* */ comments. Clause order is exactly file/include order.

namespace jumpcop {

struct Problem {
  Context ctx;
  std::vector<Clause> clauses;
  std::string origin;
};

struct ParseDiagnostic {
  std::string file;
  uint32_t line = 0;    // 1-based
  uint32_t column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

using ParseResult = std::variant<Problem, ParseDiagnostic>;

// Includes resolve against include_dir, then the problem's directory, then
// the TPTP environment variable.
ParseResult parse_problem(const std::string& path, const std::optional<std::string>& include_dir = {});
ParseResult parse_problem_string(const std::string& text, const std::string& origin = "<string>",
                                 const std::optional<std::string>& include_dir = {});

enum class StartPolicy : uint8_t { ConjectureFirst, All };

// Indices of start clauses in input order. Conjecture-first falls back to
// all clauses when the problem has no negated_conjecture.
std::vector<uint32_t> select_start_clauses(const Problem& problem, StartPolicy policy);

// TPTP text that reparses to a structurally identical problem.
std::string print_problem(const Problem& problem);

}  // namespace jumpcop
