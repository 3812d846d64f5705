"""Decomposition rules: problem construction, case splits, recursive calls."""
import pytest

from synthe.checker import CheckConfig
from synthe.interp import Interp
from synthe.lang import (
    AdtType,
    BIGINT,
    BinaryOp,
    BOOL,
    INT,
    IsConstructor,
    Let,
    Literal,
    MatchExpr,
    Param,
    TRUE,
    Variable,
)
from synthe.parser import parse_expr
from synthe.printer import print_expr
from synthe.rules import (
    Binding,
    BoolFact,
    PathCondition,
    Solution,
    TerminatesMarker,
    args_smaller,
    case_split_adt,
    case_split_candidates,
    ground_solve,
    introduce_rec_calls,
    make_initial_problem,
    split_disjunction,
)
from synthe.values import VCtor, ValueEnumerator, value_size

from conftest import build, load_benchmark

LIST = AdtType("List", ())


# ----------------------------------------------------------- problem creation


def test_initial_problem_from_choose():
    prog = load_benchmark("list_insert")
    p = make_initial_problem(prog, "insert")
    assert [x.name for x in p.inputs] == ["l", "v"]
    assert [x.name for x in p.outputs] == ["out"]
    m = p.pi.marker()
    assert m is not None
    assert m.fn == "insert"
    assert m.args == (Variable("l"), Variable("v"))


def test_initial_problem_conjoins_precondition_and_postcondition():
    prog = build("""
def f(n: BigInt): BigInt = {
  require(0 < n)
  choose { (out: BigInt) => out == n }
} ensuring { r => 0 <= r }
""")
    p = make_initial_problem(prog, "f")
    assert [print_expr(f) for f in p.pi.facts()] == ["BigInt(0) < n"]
    # spec is the choose predicate and the postcondition over the output
    assert print_expr(p.spec) == "out == n && BigInt(0) <= out"


def test_initial_problem_rejects_concrete_functions():
    prog = build("def f(n: BigInt): BigInt = { n }")
    with pytest.raises(ValueError):
        make_initial_problem(prog, "f")


# ------------------------------------------------------------------ argsSmaller


def test_smaller_positive_int():
    pi = PathCondition((BoolFact(parse_expr("0 < i")),))
    prog = build("def z(): BigInt = { 0 }")
    got = args_smaller(Variable("i"), INT, pi, prog)
    assert got == [BinaryOp("-", Variable("i"), Literal(1, INT))]


def test_smaller_negative_int():
    pi = PathCondition((BoolFact(parse_expr("i < 0")),))
    prog = build("def z(): BigInt = { 0 }")
    got = args_smaller(Variable("i"), INT, pi, prog)
    assert got == [BinaryOp("+", Variable("i"), Literal(1, INT))]


def test_smaller_positive_bigint():
    pi = PathCondition((BoolFact(parse_expr("0 < n")),))
    prog = build("def z(): BigInt = { 0 }")
    got = args_smaller(Variable("n"), BIGINT, pi, prog)
    assert got == [BinaryOp("-", Variable("n"), Literal(1, BIGINT))]


def test_smaller_negative_bigint():
    pi = PathCondition((BoolFact(parse_expr("n < 0")),))
    prog = build("def z(): BigInt = { 0 }")
    got = args_smaller(Variable("n"), BIGINT, pi, prog)
    assert got == [BinaryOp("+", Variable("n"), Literal(1, BIGINT))]


def test_smaller_adt_uses_recursive_fields(list_lib):
    pi = PathCondition((
        BoolFact(IsConstructor(Variable("l"), "Cons")),
        Binding("h0", parse_expr("l.head"), BIGINT),
        Binding("t0", parse_expr("l.tail"), LIST),
    ))
    got = args_smaller(Variable("l"), LIST, pi, list_lib)
    assert got == [Variable("t0")]


def test_smaller_adt_descends_transitively(list_lib):
    pi = PathCondition((
        BoolFact(IsConstructor(Variable("l"), "Cons")),
        Binding("t0", parse_expr("l.tail"), LIST),
        BoolFact(IsConstructor(Variable("t0"), "Cons")),
        Binding("t1", parse_expr("t0.tail"), LIST),
    ))
    got = args_smaller(Variable("l"), LIST, pi, list_lib)
    assert got == [Variable("t0"), Variable("t1")]


def test_smaller_defaults_to_empty(list_lib):
    # unconstrained integer, unfixed ADT, boolean: nothing is known smaller
    empty = PathCondition()
    prog = list_lib
    assert args_smaller(Variable("n"), BIGINT, empty, prog) == []
    assert args_smaller(Variable("l"), LIST, empty, prog) == []
    assert args_smaller(Variable("p"), BOOL, empty, prog) == []


def _admitted_envs(prog, params, pi, bound):
    """All value environments of componentwise size <= bound passing pi,
    with bindings installed."""
    interp = Interp(prog)
    en = ValueEnumerator(prog)
    for vec in en.input_vectors(tuple(params), bound):
        env = {p.name: v for p, v in zip(params, vec)}
        ok = True
        for item in pi.checker_items():
            if item[0] == "bind":
                env[item[1]] = interp.eval_expr(item[2], env)
            elif interp.eval_expr(item[1], env) is not True:
                ok = False
                break
        if ok:
            yield env


def test_smaller_is_strict_by_brute_force(list_lib):
    """Every expression returned by args_smaller evaluates to a strictly
    smaller value on every admitted input of size <= 4."""
    interp = Interp(list_lib)
    cases = [
        (Param("n", BIGINT), PathCondition((BoolFact(parse_expr("0 < n")),))),
        (Param("n", BIGINT), PathCondition((BoolFact(parse_expr("n < 0")),))),
        (
            Param("l", LIST),
            PathCondition((
                BoolFact(IsConstructor(Variable("l"), "Cons")),
                Binding("h0", parse_expr("l.head"), BIGINT),
                Binding("t0", parse_expr("l.tail"), LIST),
            )),
        ),
        (
            Param("l", LIST),
            PathCondition((
                BoolFact(IsConstructor(Variable("l"), "Cons")),
                Binding("t0", parse_expr("l.tail"), LIST),
                BoolFact(IsConstructor(Variable("t0"), "Cons")),
                Binding("t1", parse_expr("t0.tail"), LIST),
            )),
        ),
    ]
    checked = 0
    for param, pi in cases:
        smaller = args_smaller(Variable(param.name), param.type, pi, list_lib)
        assert smaller, f"expected progress for {param.name} under {pi.describe()}"
        for env in _admitted_envs(list_lib, (param,), pi, 4):
            base = value_size(env[param.name])
            for e in smaller:
                assert value_size(interp.eval_expr(e, env)) < base
                checked += 1
    assert checked > 0


# ------------------------------------------------------------- ADT case split


def test_case_split_candidates_filters(list_lib):
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
adt Box = Box(v: BigInt)
def f(l: List, b: Box, n: BigInt): List = {
  choose { (out: List) => out == l }
}
""")
    p = make_initial_problem(prog, "f")
    assert case_split_candidates(p) == ["l"]
    fixed = p.pi.conjoin(BoolFact(IsConstructor(Variable("l"), "Cons")))
    import dataclasses

    assert case_split_candidates(dataclasses.replace(p, pi=fixed)) == []


def test_case_split_adt_builds_branches(list_lib):
    prog = load_benchmark("list_insert")
    p = make_initial_problem(prog, "insert")
    app = case_split_adt(p, "l")
    assert app.rule == "case_split_adt"
    nil_p, cons_p = app.subproblems
    assert IsConstructor(Variable("l"), "Nil") in nil_p.pi.facts()
    assert IsConstructor(Variable("l"), "Cons") in cons_p.pi.facts()
    binds = {b.name: b.type for b in cons_p.pi.bindings()}
    assert binds == {"h0": BIGINT, "t0": LIST}
    # the spec and outputs are untouched
    assert cons_p.spec == p.spec
    assert cons_p.outputs == p.outputs


def test_case_split_recompose_builds_match(list_lib):
    prog = load_benchmark("list_insert")
    p = make_initial_problem(prog, "insert")
    app = case_split_adt(p, "l")
    s = app.recompose([
        Solution(TRUE, parse_expr("Nil()")),
        Solution(TRUE, parse_expr("Cons(h0, t0)")),
    ])
    assert s.pre == TRUE
    assert isinstance(s.term, MatchExpr)
    assert s.term.scrutinee == Variable("l")
    assert [c.pattern.ctor for c in s.term.cases] == ["Nil", "Cons"]


# -------------------------------------------------------------- ground solving

CFG = CheckConfig(input_depth=4)


def test_ground_solve_finds_int_constant():
    prog = build("""
def two(n: BigInt): BigInt = { choose { (out: BigInt) => out == 2 } }
""")
    p = make_initial_problem(prog, "two")
    s = ground_solve(p, CFG)
    assert s is not None
    assert s.term == Literal(2, BIGINT)
    assert s.pre == TRUE


def test_ground_solve_finds_adt_constant():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
def empty(l: List): List = { choose { (out: List) => size(out) == 0 } }
""")
    p = make_initial_problem(prog, "empty")
    s = ground_solve(p, CFG)
    assert s is not None
    from synthe.lang import ConstructorApp

    assert isinstance(s.term, ConstructorApp) and s.term.ctor == "Nil"


def test_ground_solve_gives_up_on_input_dependent_specs():
    prog = build("""
def idf(n: BigInt): BigInt = { choose { (out: BigInt) => out == n } }
""")
    p = make_initial_problem(prog, "idf")
    assert ground_solve(p, CFG) is None


def test_ground_solve_skips_problems_with_rec_bindings():
    prog = build("""
def f(n: BigInt): BigInt = { choose { (out: BigInt) => out == 0 } }
""")
    p = make_initial_problem(prog, "f")
    import dataclasses

    pi = p.pi.conjoin(Binding("rec", parse_expr("f(n)"), BIGINT))
    p2 = dataclasses.replace(p, pi=pi)
    assert ground_solve(p2, CFG) is None


# ---------------------------------------------------------- split disjunction


def test_split_disjunction_on_or_spec():
    prog = build("""
def f(n: BigInt): BigInt = {
  choose { (out: BigInt) => out == n || out == 0 - n }
}
""")
    p = make_initial_problem(prog, "f")
    app = split_disjunction(p)
    assert app is not None
    l, r = app.subproblems
    assert l.spec == p.spec.lhs
    assert r.spec == p.spec.rhs
    s = app.recompose([
        Solution(parse_expr("0 <= n"), parse_expr("n")),
        Solution(TRUE, parse_expr("0 - n")),
    ])
    # an always-true branch makes the combined precondition collapse
    assert s.pre == TRUE
    assert print_expr(s.term) == "if (0 <= n) n else 0 - n"


def test_split_disjunction_requires_top_level_or():
    prog = build("""
def f(n: BigInt): BigInt = { choose { (out: BigInt) => out == n } }
""")
    assert split_disjunction(make_initial_problem(prog, "f")) is None


# ----------------------------------------------------------- recursive calls


def test_rec_calls_need_a_marker(list_lib):
    prog = load_benchmark("unary_add")
    p = make_initial_problem(prog, "add")
    stripped = p.pi.without_marker()
    import dataclasses

    assert introduce_rec_calls(dataclasses.replace(p, pi=stripped)) == []


def test_rec_calls_consume_marker_and_bind_rec():
    prog = load_benchmark("unary_add")
    p = make_initial_problem(prog, "add")
    app = case_split_adt(p, "a")
    s_branch = app.subproblems[1]  # a is S(p0)
    apps = introduce_rec_calls(s_branch)
    assert len(apps) == 1
    (rec_app,) = apps
    sub = rec_app.subproblems[0]
    assert sub.pi.marker() is None
    rec_binds = [b for b in sub.pi.bindings() if b.name == "rec"]
    assert len(rec_binds) == 1
    assert rec_binds[0].expr == parse_expr("add(p0, b)")
    assert rec_binds[0].type == AdtType("Nat", ())


def test_rec_call_recompose_wraps_in_let():
    prog = load_benchmark("unary_add")
    p = make_initial_problem(prog, "add")
    s_branch = case_split_adt(p, "a").subproblems[1]
    (rec_app,) = introduce_rec_calls(s_branch)
    s = rec_app.recompose([Solution(TRUE, parse_expr("S(rec)"))])
    assert isinstance(s.term, Let)
    assert s.term.name == "rec"
    assert s.term.value == parse_expr("add(p0, b)")
    assert s.term.body == parse_expr("S(rec)")


def test_rec_calls_one_application_per_shrunk_position(list_lib):
    prog = load_benchmark("list_union")
    p = make_initial_problem(prog, "union")
    # split the first argument: only position 0 can shrink
    first = case_split_adt(p, "a").subproblems[1]
    apps = introduce_rec_calls(first)
    assert len(apps) == 1
    assert apps[0].key.startswith("0:")
    # splitting the second as well offers both positions
    both = case_split_adt(first, "b").subproblems[1]
    keys = {a.key.split(":")[0] for a in introduce_rec_calls(both)}
    assert keys == {"0", "1"}
