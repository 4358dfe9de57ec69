#pragma once

#include <iosfwd>
#include <vector>

#include "jumpcop/search.hpp"

namespace jumpcop {

// Exit codes: 0 Theorem/Satisfiable, 1 GaveUp/Timeout, 2 parse or usage
// errors. Prints exactly one `% SZS status ...` line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jumpcop
