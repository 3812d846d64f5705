"""Call-by-value interpreter with a per-query fuel bound.

Fuel is charged once per function call.  Running out of fuel, dividing by
zero, violating a callee precondition, overflowing Int arithmetic, failing
to match, or reaching a hole all raise EvalError; callers decide what an
error means (the checker treats a failing candidate term identically to a
wrong one).  Postconditions of called functions are not checked here.
"""
from __future__ import annotations

import sys

from .lang import (
    BinaryOp,
    Choose,
    ConstructorApp,
    CtorPattern,
    Expr,
    FieldSelect,
    FunctionCall,
    Hole,
    IfExpr,
    IsConstructor,
    Let,
    Literal,
    MatchExpr,
    Pattern,
    Program,
    TuplePattern,
    TupleExpr,
    TupleSelect,
    UnaryOp,
    Unsolved,
    Variable,
    VarPattern,
    WildcardPattern,
    INT as _INT,
)
from .typecheck import INT_MAX, INT_MIN
from .values import I32, VCtor, Value

if sys.getrecursionlimit() < 30000:
    sys.setrecursionlimit(30000)

DEFAULT_FUEL = 1000


class EvalError(Exception):
    """kind is one of: fuel, div_zero, overflow, precondition, match,
    field, unsolved, hole, type."""

    def __init__(self, kind: str, msg: str = ""):
        super().__init__(msg or kind)
        self.kind = kind


class _Fuel:
    __slots__ = ("remaining",)

    def __init__(self, n: int):
        self.remaining = n


def _wrap_i32(n: int) -> I32:
    if not (INT_MIN <= n <= INT_MAX):
        raise EvalError("overflow", f"Int overflow: {n}")
    return I32(n)


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("div_zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _trunc_mod(a: int, b: int) -> int:
    return a - _trunc_div(a, b) * b


def match_pattern(p: Pattern, v: Value, out: dict[str, Value]) -> bool:
    if isinstance(p, WildcardPattern):
        return True
    if isinstance(p, VarPattern):
        out[p.name] = v
        return True
    if isinstance(p, TuplePattern):
        if not isinstance(v, tuple) or len(v) != len(p.elems):
            raise EvalError("type", "tuple pattern on non-tuple value")
        if p.binder:
            out[p.binder] = v
        return all(match_pattern(sub, e, out) for sub, e in zip(p.elems, v))
    assert isinstance(p, CtorPattern)
    if not isinstance(v, VCtor):
        raise EvalError("type", "constructor pattern on non-ADT value")
    if v.ctor != p.ctor:
        return False
    if p.binder:
        out[p.binder] = v
    return all(match_pattern(sub, a, out) for sub, a in zip(p.args, v.args))


class Interp:
    def __init__(self, prog: Program, fuel: int = DEFAULT_FUEL):
        self.prog = prog
        self.fuel = fuel

    def eval_expr(self, e: Expr, env: dict[str, Value]) -> Value:
        """Evaluate an expression as one query with a fresh fuel budget."""
        return self._eval(e, env, _Fuel(self.fuel))

    def eval_call(self, name: str, args: list[Value]) -> Value:
        call = FunctionCall(name, tuple(Variable(f"$a{i}") for i in range(len(args))))
        env = {f"$a{i}": a for i, a in enumerate(args)}
        return self.eval_expr(call, env)

    # ---------------------------------------------------------------- core

    def _eval(self, e: Expr, env: dict[str, Value], fuel: _Fuel) -> Value:
        if isinstance(e, Literal):
            if isinstance(e.value, bool):
                return e.value
            if e.type == _INT:
                return I32(e.value)
            return e.value
        if isinstance(e, Variable):
            try:
                return env[e.name]
            except KeyError:
                raise EvalError("type", f"unbound variable {e.name}") from None
        if isinstance(e, BinaryOp):
            op = e.op
            if op == "&&":
                lhs = self._eval(e.lhs, env, fuel)
                if lhs is False:
                    return False
                return self._bool(self._eval(e.rhs, env, fuel))
            if op == "||":
                lhs = self._eval(e.lhs, env, fuel)
                if lhs is True:
                    return True
                return self._bool(self._eval(e.rhs, env, fuel))
            lhs = self._eval(e.lhs, env, fuel)
            rhs = self._eval(e.rhs, env, fuel)
            if op == "==":
                return self._equal(lhs, rhs)
            return self._arith(op, lhs, rhs)
        if isinstance(e, UnaryOp):
            v = self._eval(e.operand, env, fuel)
            if e.op == "!":
                return not self._bool(v)
            if isinstance(v, I32):
                return _wrap_i32(-v.v)
            if isinstance(v, int) and not isinstance(v, bool):
                return -v
            raise EvalError("type", "- on non-numeric value")
        if isinstance(e, IfExpr):
            cond = self._bool(self._eval(e.cond, env, fuel))
            return self._eval(e.then if cond else e.els, env, fuel)
        if isinstance(e, Let):
            v = self._eval(e.value, env, fuel)
            return self._eval(e.body, {**env, e.name: v}, fuel)
        if isinstance(e, MatchExpr):
            v = self._eval(e.scrutinee, env, fuel)
            for c in e.cases:
                bound: dict[str, Value] = {}
                if match_pattern(c.pattern, v, bound):
                    return self._eval(c.body, {**env, **bound} if bound else env, fuel)
            raise EvalError("match", "no case matched")
        if isinstance(e, FunctionCall):
            args = [self._eval(a, env, fuel) for a in e.args]
            return self._call(e.name, args, fuel)
        if isinstance(e, ConstructorApp):
            return VCtor(e.ctor, tuple(self._eval(a, env, fuel) for a in e.args))
        if isinstance(e, TupleExpr):
            return tuple(self._eval(x, env, fuel) for x in e.elems)
        if isinstance(e, TupleSelect):
            v = self._eval(e.base, env, fuel)
            if not isinstance(v, tuple) or e.index >= len(v):
                raise EvalError("type", "tuple selection on non-tuple value")
            return v[e.index]
        if isinstance(e, FieldSelect):
            v = self._eval(e.base, env, fuel)
            if not isinstance(v, VCtor):
                raise EvalError("type", "field selection on non-ADT value")
            ctor = self.prog.constructor(v.ctor)
            for f, a in zip(ctor.fields, v.args):
                if f.name == e.field:
                    return a
            raise EvalError("field", f"{v.ctor} has no field {e.field}")
        if isinstance(e, IsConstructor):
            v = self._eval(e.expr, env, fuel)
            if not isinstance(v, VCtor):
                raise EvalError("type", "constructor test on non-ADT value")
            return v.ctor == e.ctor
        if isinstance(e, Hole):
            raise EvalError("hole", "evaluated a hole")
        if isinstance(e, Unsolved):
            raise EvalError("unsolved", "evaluated an unsolved branch")
        if isinstance(e, Choose):
            raise EvalError("type", "cannot evaluate choose")
        raise EvalError("type", f"cannot evaluate {type(e).__name__}")

    def _call(self, name: str, args: list[Value], fuel: _Fuel) -> Value:
        if fuel.remaining <= 0:
            raise EvalError("fuel", "out of fuel")
        fuel.remaining -= 1
        f = self.prog.functions_by_name.get(name)
        if f is None:
            raise EvalError("type", f"unknown function {name}")
        if len(args) != len(f.params):
            raise EvalError("type", f"arity mismatch calling {name}")
        env = {p.name: a for p, a in zip(f.params, args)}
        if f.precondition is not None:
            if self._bool(self._eval(f.precondition, env, fuel)) is False:
                raise EvalError("precondition", f"precondition of {name} violated")
        return self._eval(f.body, env, fuel)

    # ------------------------------------------------------------- helpers

    @staticmethod
    def _bool(v: Value) -> bool:
        if isinstance(v, bool):
            return v
        raise EvalError("type", "expected a Bool value")

    @staticmethod
    def _equal(a: Value, b: Value) -> bool:
        if isinstance(a, I32) and isinstance(b, I32):
            return a.v == b.v
        if type(a) is not type(b):
            raise EvalError("type", "== on values of different types")
        return a == b

    @staticmethod
    def _arith(op: str, a: Value, b: Value) -> Value:
        if isinstance(a, I32) and isinstance(b, I32):
            x, y = a.v, b.v
            if op == "<":
                return x < y
            if op == "<=":
                return x <= y
            if op == "+":
                return _wrap_i32(x + y)
            if op == "-":
                return _wrap_i32(x - y)
            if op == "*":
                return _wrap_i32(x * y)
            if op == "div":
                return _wrap_i32(_trunc_div(x, y))
            if op == "mod":
                return _wrap_i32(_trunc_mod(x, y))
        if (
            isinstance(a, int)
            and isinstance(b, int)
            and not isinstance(a, bool)
            and not isinstance(b, bool)
        ):
            if op == "<":
                return a < b
            if op == "<=":
                return a <= b
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "div":
                return _trunc_div(a, b)
            if op == "mod":
                return _trunc_mod(a, b)
        raise EvalError("type", f"{op} on non-numeric operands")


def plug(partial: Expr, candidate: Expr) -> Expr:
    """Replace the unique placeholder in `partial` with `candidate`.

    Raises ValueError unless `partial` contains exactly one Hole.
    """
    import dataclasses

    from .lang import count_holes

    n = count_holes(partial)
    if n != 1:
        raise ValueError(f"plug expects exactly one hole, found {n}")

    def go(e: Expr) -> Expr:
        if isinstance(e, Hole):
            return candidate
        changes = {}
        for f in dataclasses.fields(e):
            v = getattr(e, f.name)
            if isinstance(v, Expr):
                new = go(v)
                if new is not v:
                    changes[f.name] = new
            elif isinstance(v, tuple) and any(isinstance(x, Expr) for x in v):
                new_tuple = tuple(go(x) if isinstance(x, Expr) else x for x in v)
                if new_tuple != v:
                    changes[f.name] = new_tuple
            elif f.name == "cases" and isinstance(v, tuple):
                new_cases = []
                changed = False
                for c in v:
                    body = go(c.body)
                    if body is not c.body:
                        c = dataclasses.replace(c, body=body)
                        changed = True
                    new_cases.append(c)
                if changed:
                    changes[f.name] = tuple(new_cases)
        return dataclasses.replace(e, **changes) if changes else e

    return go(partial)
