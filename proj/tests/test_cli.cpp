#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "jumpcop/cli.hpp"

using namespace jumpcop;

namespace {

const std::string kProblemDir = JUMPCOP_PROBLEM_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("status lines are bit-exact and exit codes follow the outcome") {
  SUBCASE("Theorem") {
    CliRun r = cli({kProblemDir + "/tptp/Problems/PUZ/PUZ009-1.p"});
    CHECK(r.code == 0);
    CHECK(r.out == "% SZS status Theorem\n");
  }
  SUBCASE("Satisfiable") {
    CliRun r = cli({kProblemDir + "/fixtures/single_unit.p"});
    CHECK(r.code == 0);
    CHECK(r.out == "% SZS status Satisfiable\n");
  }
  SUBCASE("GaveUp") {
    CliRun r = cli({kProblemDir + "/running.p", "--depth", "3"});
    CHECK(r.code == 1);
    CHECK(r.out == "% SZS status GaveUp\n");
  }
  SUBCASE("Timeout") {
    CliRun r = cli({kProblemDir + "/running.p", "--time", "0.000001"});
    CHECK(r.code == 1);
    CHECK(r.out == "% SZS status Timeout\n");
  }
}

TEST_CASE("parse and usage failures exit with code 2") {
  SUBCASE("missing file") {
    CliRun r = cli({kProblemDir + "/no_such_problem.p"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  SUBCASE("syntax error names the location") {
    CliRun r = cli({kProblemDir + "/fixtures/broken.p"});
    CHECK(r.code == 2);
    CHECK(r.err.find("broken.p:2:") != std::string::npos);
  }
  SUBCASE("unknown flag") {
    CliRun r = cli({kProblemDir + "/running.p", "--frobnicate"});
    CHECK(r.code == 2);
  }
  SUBCASE("no problem path") {
    CliRun r = cli({});
    CHECK(r.code == 2);
  }
}

TEST_CASE("--proof output re-parses and passes the checker") {
  CliRun r = cli({kProblemDir + "/tptp/Problems/PUZ/PUZ009-1.p", "--proof"});
  REQUIRE(r.code == 0);
  auto begin = r.out.find("% SZS output start Proof\n");
  auto end = r.out.find("% SZS output end Proof\n");
  REQUIRE(begin != std::string::npos);
  REQUIRE(end != std::string::npos);
  std::string block = r.out.substr(begin + 25, end - begin - 25);

  ParseResult parsed = parse_problem(kProblemDir + "/tptp/Problems/PUZ/PUZ009-1.p");
  REQUIRE(std::get_if<Problem>(&parsed));
  Problem problem = std::move(std::get<Problem>(parsed));
  auto proof = parse_proof(problem, block);
  REQUIRE(proof.has_value());
  // the CLI searched depth levels upward; the printed proof must check at
  // some level, and certainly at a loose one
  CHECK(check_proof(problem, *proof, 16).ok);
}

TEST_CASE("--stats emits one JSON line per level") {
  CliRun r = cli({kProblemDir + "/running.p", "--depth", "3", "--stats"});
  REQUIRE(r.code == 1);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "% SZS status GaveUp");
  int levels = 0;
  bool learned_any = false;
  while (std::getline(lines, line)) {
    CHECK(line.find("{\"level\": ") == 0);
    CHECK(line.find("\"constraints_learned\": ") != std::string::npos);
    if (line.find("\"constraints_learned\": 0") == std::string::npos) learned_any = true;
    ++levels;
  }
  CHECK(levels == 3);
  CHECK(learned_any);
}

TEST_CASE("--dump-constraints prints the learned constraints as atoms") {
  CliRun r = cli({kProblemDir + "/running.p", "--depth", "3", "--dump-constraints"});
  REQUIRE(r.code == 1);
  // the first constraint of level 3 is the running example's stuck reason
  CHECK(r.out.find("% constraint level=3: r(x@e/0,x@e/1)@3 x@e/0->c x@e/1->d\n") !=
        std::string::npos);
}

TEST_CASE("chronological mode is reachable from the command line") {
  CliRun r = cli({kProblemDir + "/tptp/Problems/PUZ/PUZ009-1.p", "--mode", "chronological"});
  CHECK(r.code == 0);
  CHECK(r.out == "% SZS status Theorem\n");
}

TEST_CASE("--include-dir resolves axiom includes") {
  CliRun r = cli({kProblemDir + "/tptp/Problems/PUZ/PUZ006-1.p", "--include-dir",
                  kProblemDir + "/tptp", "--depth", "9"});
  CHECK(r.code == 0);
  CHECK(r.out == "% SZS status Theorem\n");
}
