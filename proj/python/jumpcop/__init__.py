"""Connection tableau prover with constraint-learning backjumping."""

from ._core import (
    Problem,
    check_proof,
    main,
    parse_problem,
    parse_problem_string,
    print_problem,
    prove,
    run_level,
    select_start_clauses,
)

__all__ = [
    "Problem",
    "check_proof",
    "main",
    "parse_problem",
    "parse_problem_string",
    "print_problem",
    "prove",
    "run_level",
    "select_start_clauses",
]
