"""Bounded exhaustive checking: verdicts, candidate checking, verification."""
from synthe.checker import (
    CheckConfig,
    Counterexample,
    Unknown,
    Valid,
    check_candidate,
    find_counterexample,
    find_satisfying_pair,
    verify_function,
)
from synthe.lang import Param, BIGINT
from synthe.parser import parse_expr
from synthe.rules import make_initial_problem
from synthe.values import VCtor

from conftest import build, cexpr

CFG = CheckConfig(input_depth=4)


def test_valid_when_formula_always_holds():
    prog = build("def id(n: BigInt): BigInt = { n }")
    v = find_counterexample(
        prog, (Param("n", BIGINT),), (), (), parse_expr("n == n"), CFG
    )
    assert isinstance(v, Valid)


def test_counterexample_is_first_in_enumeration_order():
    prog = build("def id(n: BigInt): BigInt = { n }")
    v = find_counterexample(
        prog, (Param("n", BIGINT),), (), (), parse_expr("n < 2"), CFG
    )
    # enumeration order is 0, 1, -1, 2, ... so the first failure is 2
    assert v == Counterexample((2,))


def test_path_condition_restricts_inputs():
    prog = build("def id(n: BigInt): BigInt = { n }")
    pi = (("fact", parse_expr("n < 2")),)
    v = find_counterexample(
        prog, (Param("n", BIGINT),), pi, (), parse_expr("n < 2"), CFG
    )
    assert isinstance(v, Valid)


def test_candidate_binding_errors_count_as_failures():
    prog = build("def id(n: BigInt): BigInt = { n }")
    binds = (("out", parse_expr("1 / n")),)
    v = find_counterexample(
        prog, (Param("n", BIGINT),), (), binds, parse_expr("out * n <= 1"), CFG
    )
    assert v == Counterexample((0,))  # division by zero on the first input


def test_unknown_when_every_input_exhausts_fuel():
    prog = build("def spin(n: BigInt): BigInt = { spin(n) }")
    pi = (("bind", "x", parse_expr("spin(n)")),)
    cfg = CheckConfig(input_depth=2, fuel=40)
    v = find_counterexample(
        prog, (Param("n", BIGINT),), pi, (), parse_expr("x == x"), cfg
    )
    assert isinstance(v, Unknown)


def test_check_candidate_against_problem():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
def ins(l: List, v: BigInt): List = {
  choose { (out: List) => size(out) == size(l) + 1 }
}
""")
    problem = make_initial_problem(prog, "ins")
    good = cexpr(prog, "Cons(v, l)")
    bad = parse_expr("l")
    assert isinstance(check_candidate(problem, good, CFG), Valid)
    v = check_candidate(problem, bad, CFG)
    assert isinstance(v, Counterexample)


def test_check_candidate_runs_rec_bindings_through_the_candidate():
    # the path condition binds rec <- dup(t0); with a partial solution the
    # candidate itself must serve that recursive call
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
def dup(l: List): List = {
  choose { (out: List) => size(out) == size(l) * 2 }
}
""")
    from synthe.rules import case_split_adt, introduce_rec_calls

    problem = make_initial_problem(prog, "dup")
    split = case_split_adt(problem, "l")
    cons_branch = split.subproblems[1]
    (rec_app,) = introduce_rec_calls(cons_branch)
    sub = rec_app.subproblems[0]
    partial = cexpr(prog, """l match {
  case Nil() => Nil()
  case Cons(h0, t0) => ???
}""")
    good = cexpr(prog, "Cons(h0, Cons(h0, rec))")
    bad = cexpr(prog, "Cons(h0, rec)")
    assert isinstance(check_candidate(sub, good, CFG, partial=partial), Valid)
    assert isinstance(check_candidate(sub, bad, CFG, partial=partial), Counterexample)


def test_verify_function_end_to_end():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
def ins(l: List, v: BigInt): List = { Cons(v, l) }
""")
    out = (Param("out", prog.functions_by_name["ins"].return_type),)
    spec = parse_expr("size(out) == size(l) + 1")
    assert isinstance(verify_function(prog, "ins", out, spec, CFG), Valid)
    wrong_spec = parse_expr("size(out) == size(l)")
    assert isinstance(verify_function(prog, "ins", out, wrong_spec, CFG), Counterexample)


def test_find_satisfying_pair_prefers_earlier_inputs():
    prog = build("""
def f(n: BigInt): BigInt = {
  choose { (out: BigInt) => out == n * n }
}
""")
    problem = make_initial_problem(prog, "f")
    cands = [parse_expr("n + 2"), parse_expr("n * n")]
    got = find_satisfying_pair(cands, problem, CFG)
    assert got is not None
    cand, vec = got
    # on the very first input (n = 0) only n * n satisfies the spec
    assert vec == (0,)
    assert cand == parse_expr("n * n")


def test_find_satisfying_pair_none_cases():
    prog = build("""
def f(n: BigInt): BigInt = {
  choose { (out: BigInt) => out * out == 0 - 1 }
}
""")
    problem = make_initial_problem(prog, "f")
    assert find_satisfying_pair([], problem, CFG) is None
    assert find_satisfying_pair([parse_expr("n")], problem, CFG) is None


def test_precondition_limits_verification_inputs():
    prog = build("""
def dec(n: BigInt): BigInt = {
  require(0 < n)
  n - 1
}
""")
    out = (Param("out", BIGINT),)
    spec = parse_expr("0 <= out")
    assert isinstance(verify_function(prog, "dec", out, spec, CFG), Valid)
