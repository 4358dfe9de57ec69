"""Smoke tests for the python bindings."""

import os

import pytest

import jumpcop

PROBLEM_DIR = os.environ.get(
    "JUMPCOP_PROBLEM_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "problems"),
)
TPTP_ROOT = os.path.join(PROBLEM_DIR, "tptp")

RUNNING = """
cnf(c1, axiom, p(X) | q(Y) | r(X,Y) | p(Z)).
cnf(c2, axiom, ~p(X) | s).
cnf(c3, axiom, ~s | ~p(c)).
cnf(c4, axiom, ~q(d)).
cnf(c5, axiom, ~p(f(c))).
cnf(c6, axiom, ~r(X,c)).
cnf(c7, axiom, ~r(d,X)).
"""


def test_parse_and_print_round_trip():
    problem = jumpcop.parse_problem_string(RUNNING)
    assert len(problem) == 7
    assert problem.clause_names()[0] == "c1"
    printed = jumpcop.print_problem(problem)
    again = jumpcop.parse_problem_string(printed)
    assert jumpcop.print_problem(again) == printed


def test_parse_error_raises():
    with pytest.raises(ValueError):
        jumpcop.parse_problem_string("cnf(a, axiom, p | ).")


def test_prove_trivial_theorem():
    problem = jumpcop.parse_problem_string(
        "cnf(a, axiom, p(c)). cnf(g, negated_conjecture, ~p(c))."
    )
    outcome = jumpcop.prove(problem, time=5.0)
    assert outcome["status"] == "Theorem"
    assert outcome["depth"] == 2
    assert outcome["proof"] is not None
    ok, message = jumpcop.check_proof(problem, outcome["proof"], outcome["depth"])
    assert ok, message


def test_prove_satisfiable():
    problem = jumpcop.parse_problem_string("cnf(a, axiom, p(c)).")
    outcome = jumpcop.prove(problem, time=5.0, start="all")
    assert outcome["status"] == "Satisfiable"


def test_modes_agree_on_running_levels():
    for limit in (1, 2, 3):
        learning = jumpcop.run_level(
            jumpcop.parse_problem_string(RUNNING), limit, mode="learning", start="all"
        )
        chrono = jumpcop.run_level(
            jumpcop.parse_problem_string(RUNNING), limit, mode="chronological", start="all"
        )
        assert learning["closed"] == chrono["closed"] == False  # noqa: E712
        assert learning["stats"]["constraints_learned"] > 0


def test_puzzle_end_to_end():
    path = os.path.join(TPTP_ROOT, "Problems", "PUZ", "PUZ005-1.p")
    problem = jumpcop.parse_problem(path, include_dir=TPTP_ROOT)
    outcome = jumpcop.prove(problem, time=60.0)
    assert outcome["status"] == "Theorem"
    assert outcome["depth"] == 8
    ok, message = jumpcop.check_proof(problem, outcome["proof"], outcome["depth"])
    assert ok, message
    # levels below the proof depth are exhausted
    assert len(outcome["stats"]) == 8


def test_start_clause_selection():
    problem = jumpcop.parse_problem_string(
        "cnf(a, axiom, p). cnf(g, negated_conjecture, ~p)."
    )
    assert jumpcop.select_start_clauses(problem) == ["g"]
    assert jumpcop.select_start_clauses(problem, "all") == ["a", "g"]


def test_cli_entry_point():
    code, out, err = jumpcop.main(
        [os.path.join(TPTP_ROOT, "Problems", "PUZ", "PUZ009-1.p"), "--proof"]
    )
    assert code == 0
    assert out.startswith("% SZS status Theorem\n")
    assert "% SZS output start Proof" in out
    assert err == ""
