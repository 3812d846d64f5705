"""Interpreter behaviour: arithmetic, errors, fuel, and hole plugging."""
import pytest

from synthe.interp import DEFAULT_FUEL, EvalError, Interp, plug
from synthe.lang import (
    CtorPattern,
    Hole,
    Literal,
    MatchCase,
    MatchExpr,
    Variable,
    BIGINT,
)
from synthe.parser import parse_expr
from synthe.values import I32, VCtor

from conftest import build

EMPTY = build("def zero(): BigInt = { 0 }")


def ev(src: str, env=None, prog=EMPTY, fuel=DEFAULT_FUEL):
    return Interp(prog, fuel=fuel).eval_expr(parse_expr(src), env or {})


def kind_of(src: str, env=None, prog=EMPTY, fuel=DEFAULT_FUEL) -> str:
    with pytest.raises(EvalError) as exc:
        ev(src, env, prog, fuel)
    return exc.value.kind


def test_bigint_arithmetic_is_unbounded():
    big = 2**80
    assert ev("a * a", {"a": big}) == 2**160
    assert ev("1 + 2 * 3") == 7


def test_division_truncates_toward_zero():
    # C-style semantics: (-7) div 2 == -3 and the sign of mod follows the
    # dividend, so a == (a div b) * b + (a mod b) holds everywhere
    assert ev("a / b", {"a": -7, "b": 2}) == -3
    assert ev("a % b", {"a": -7, "b": 2}) == -1
    assert ev("a / b", {"a": 7, "b": -2}) == -3
    assert ev("a % b", {"a": 7, "b": -2}) == 1


def test_division_by_zero_raises():
    assert kind_of("1 / 0") == "div_zero"
    assert kind_of("1 % 0") == "div_zero"


def test_int_overflow_raises():
    env = {"a": I32(2**31 - 1), "b": I32(1)}
    assert kind_of("a + b", env) == "overflow"
    assert ev("a - b", env) == I32(2**31 - 2)


def test_short_circuit_skips_rhs_errors():
    assert ev("p && (1 / 0 == 0)", {"p": False}) is False
    assert ev("p || (1 / 0 == 0)", {"p": True}) is True
    assert kind_of("p && (1 / 0 == 0)", {"p": True}) == "div_zero"


def test_fuel_bounds_recursion():
    prog = build("def spin(n: BigInt): BigInt = { spin(n + 1) }")
    with pytest.raises(EvalError) as exc:
        Interp(prog, fuel=50).eval_call("spin", [0])
    assert exc.value.kind == "fuel"


def test_deep_but_finite_recursion_within_fuel():
    prog = build("""
def count(n: BigInt): BigInt = { if (n <= 0) 0 else 1 + count(n - 1) }
""")
    assert Interp(prog, fuel=500).eval_call("count", [400]) == 400


def test_callee_precondition_enforced():
    prog = build("""
def half(n: BigInt): BigInt = {
  require(n % 2 == 0)
  n / 2
}
def f(n: BigInt): BigInt = { half(n) }
""")
    interp = Interp(prog)
    assert interp.eval_call("f", [8]) == 4
    with pytest.raises(EvalError) as exc:
        interp.eval_call("f", [7])
    assert exc.value.kind == "precondition"


def test_match_binder_and_field_select(list_lib):
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def bump(l: List): List = { l match {
  case Nil() => l
  case c @ Cons(h, t) => Cons(h + 1, c.tail)
} }
""")
    two = VCtor("Cons", (2, VCtor("Nil", ())))
    assert Interp(prog).eval_call("bump", [two]) == VCtor("Cons", (3, VCtor("Nil", ())))


def test_field_select_on_wrong_constructor():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): BigInt = { l.head }
""")
    with pytest.raises(EvalError) as exc:
        Interp(prog).eval_call("f", [VCtor("Nil", ())])
    assert exc.value.kind == "field"


def test_match_without_matching_case():
    e = MatchExpr(Variable("l"), (MatchCase(CtorPattern("Nil", ()), Literal(0, BIGINT)),))
    with pytest.raises(EvalError) as exc:
        Interp(EMPTY).eval_expr(e, {"l": VCtor("Cons", (1, VCtor("Nil", ())))})
    assert exc.value.kind == "match"


def test_tuples_evaluate_and_select():
    assert ev("(1 + 1, 2 < 3)._1") == 2
    assert ev("(1, 2, 3)._3") == 3


def test_hole_and_unsolved_raise():
    assert kind_of("1 + ???") == "hole"


def test_plug_fills_the_single_hole():
    partial = parse_expr("1 + ???")
    assert Interp(EMPTY).eval_expr(plug(partial, Literal(41, BIGINT)), {}) == 42


def test_plug_requires_exactly_one_hole():
    with pytest.raises(ValueError):
        plug(parse_expr("1 + 2"), Literal(0, BIGINT))
    with pytest.raises(ValueError):
        plug(parse_expr("??? + ???"), Literal(0, BIGINT))


def test_preconditions_of_entry_call_checked_too():
    prog = build("""
def pos(n: BigInt): BigInt = {
  require(0 < n)
  n
}
""")
    assert Interp(prog).eval_call("pos", [3]) == 3
    with pytest.raises(EvalError):
        Interp(prog).eval_call("pos", [0])
