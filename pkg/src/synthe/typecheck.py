"""Type checking and annotation.

`resolve_program` returns a structurally identical program in which every
integer literal carries a concrete width (Int or BigInt) and every
constructor application carries the type arguments of its ADT instance.
Bare literals pick up the width of adjacent typed expressions; when nothing
nearby decides it, the width defaults to BigInt.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .lang import (
    AdtType,
    BIGINT,
    BOOL,
    BinaryOp,
    Choose,
    ConstructorApp,
    ConstructorDef,
    CtorPattern,
    Ensuring,
    Expr,
    FieldSelect,
    FunctionCall,
    FunDef,
    Hole,
    IfExpr,
    INT,
    IsConstructor,
    Let,
    Literal,
    MatchCase,
    MatchExpr,
    Pattern,
    Program,
    TuplePattern,
    TupleExpr,
    TupleSelect,
    TupleType,
    TypeRef,
    TypeVar,
    UnaryOp,
    Variable,
    VarPattern,
    WildcardPattern,
    subst_type,
)
from .printer import print_type

INT_MIN = -(2 ** 31)
INT_MAX = 2 ** 31 - 1


class TypecheckError(Exception):
    def __init__(self, msg: str, pos: Optional[tuple[int, int]] = None):
        if pos:
            msg = f"{pos[0]}:{pos[1]}: {msg}"
        super().__init__(msg)
        self.pos = pos


def _is_numeric(t: TypeRef) -> bool:
    return t in (INT, BIGINT)


def ctor_field_types(prog: Program, ctor: ConstructorDef, adt_args: tuple[TypeRef, ...]) -> tuple[TypeRef, ...]:
    adt = prog.adts_by_name[prog.ctor_to_adt[ctor.name]]
    mapping = dict(zip(adt.type_params, adt_args))
    return tuple(subst_type(f.type, mapping) for f in ctor.fields)


@dataclass
class _Ctx:
    prog: Program
    fun: FunDef


class Checker:
    def __init__(self, prog: Program):
        self.prog = prog

    # -------------------------------------------------------------- types

    def check_type_wf(self, t: TypeRef, tvars: set[str], pos=None) -> None:
        if isinstance(t, TypeVar):
            if t.name not in tvars:
                raise TypecheckError(f"unbound type variable {t.name}", pos)
            return
        if isinstance(t, TupleType):
            if len(t.elems) < 2:
                raise TypecheckError("tuple type needs at least two components", pos)
            for e in t.elems:
                self.check_type_wf(e, tvars, pos)
            return
        if isinstance(t, AdtType):
            adt = self.prog.adts_by_name.get(t.name)
            if adt is None:
                raise TypecheckError(f"unknown type {t.name}", pos)
            if len(t.args) != len(adt.type_params):
                raise TypecheckError(
                    f"{t.name} expects {len(adt.type_params)} type argument(s), got {len(t.args)}",
                    pos,
                )
            for a in t.args:
                self.check_type_wf(a, tvars, pos)

    # ---------------------------------------------------------- inference

    def infer(self, e: Expr, env: dict[str, TypeRef], ctx: _Ctx) -> tuple[Expr, Optional[TypeRef]]:
        """Returns (annotated expr, type).  A None type means the expression is
        built entirely from width-unresolved integer literals."""
        if isinstance(e, Literal):
            if isinstance(e.value, bool):
                return e, BOOL
            if e.type is not None:
                self._range_check(e)
                return e, e.type
            return e, None
        if isinstance(e, Variable):
            if e.name not in env:
                raise TypecheckError(f"unbound variable {e.name}", e.pos)
            return e, env[e.name]
        if isinstance(e, Hole):
            raise TypecheckError("cannot infer the type of ???", e.pos)
        if isinstance(e, BinaryOp):
            return self._infer_binop(e, env, ctx)
        if isinstance(e, UnaryOp):
            if e.op == "!":
                operand = self.check(e.operand, BOOL, env, ctx)
                return UnaryOp("!", operand, pos=e.pos), BOOL
            operand, t = self.infer(e.operand, env, ctx)
            if t is not None and not _is_numeric(t):
                raise TypecheckError(f"- applied to {print_type(t)}", e.pos)
            return UnaryOp("neg", operand, pos=e.pos), t
        if isinstance(e, IfExpr):
            cond = self.check(e.cond, BOOL, env, ctx)
            then, t1 = self.infer(e.then, env, ctx)
            els, t2 = self.infer(e.els, env, ctx)
            then, els, t = self._join(then, t1, els, t2, e.pos)
            return IfExpr(cond, then, els, pos=e.pos), t
        if isinstance(e, Let):
            value, vt = self.infer(e.value, env, ctx)
            if vt is None:
                value, vt = self._force(value, BIGINT), BIGINT
            body, bt = self.infer(e.body, {**env, e.name: vt}, ctx)
            return Let(e.name, value, body, pos=e.pos), bt
        if isinstance(e, MatchExpr):
            return self._infer_match(e, env, ctx, expected=None)
        if isinstance(e, FunctionCall):
            return self._infer_call(e, env, ctx)
        if isinstance(e, ConstructorApp):
            return self._infer_ctor(e, env, ctx, expected=None)
        if isinstance(e, TupleExpr):
            elems = []
            types = []
            for x in e.elems:
                xe, xt = self.infer(x, env, ctx)
                if xt is None:
                    xe, xt = self._force(xe, BIGINT), BIGINT
                elems.append(xe)
                types.append(xt)
            return TupleExpr(tuple(elems), pos=e.pos), TupleType(tuple(types))
        if isinstance(e, TupleSelect):
            base, bt = self.infer(e.base, env, ctx)
            if not isinstance(bt, TupleType):
                raise TypecheckError(
                    f"._{e.index + 1} applied to non-tuple {print_type(bt) if bt else 'BigInt'}",
                    e.pos,
                )
            if not (0 <= e.index < len(bt.elems)):
                raise TypecheckError(f"tuple has no component _{e.index + 1}", e.pos)
            return TupleSelect(base, e.index, pos=e.pos), bt.elems[e.index]
        if isinstance(e, FieldSelect):
            base, bt = self.infer(e.base, env, ctx)
            if not isinstance(bt, AdtType):
                raise TypecheckError(f".{e.field} applied to non-ADT value", e.pos)
            adt = self.prog.adts_by_name[bt.name]
            found: Optional[TypeRef] = None
            for c in adt.constructors:
                for f, ft in zip(c.fields, ctor_field_types(self.prog, c, bt.args)):
                    if f.name == e.field:
                        if found is not None and found != ft:
                            raise TypecheckError(
                                f"field {e.field} has conflicting types in {bt.name}", e.pos
                            )
                        found = ft
            if found is None:
                raise TypecheckError(f"{bt.name} has no field {e.field}", e.pos)
            return FieldSelect(base, e.field, pos=e.pos), found
        if isinstance(e, IsConstructor):
            base, bt = self.infer(e.expr, env, ctx)
            if not isinstance(bt, AdtType) or self.prog.ctor_to_adt.get(e.ctor) != bt.name:
                raise TypecheckError(f"constructor test {e.ctor} on wrong type", e.pos)
            return IsConstructor(base, e.ctor, pos=e.pos), BOOL
        if isinstance(e, Choose):
            raise TypecheckError("choose must be the entire function body", e.pos)
        raise TypecheckError(f"cannot type {type(e).__name__}", getattr(e, "pos", None))

    def check(self, e: Expr, expected: TypeRef, env: dict[str, TypeRef], ctx: _Ctx) -> Expr:
        if isinstance(e, Literal) and not isinstance(e.value, bool) and e.type is None:
            if not _is_numeric(expected):
                raise TypecheckError(f"integer literal where {print_type(expected)} expected", e.pos)
            lit = Literal(e.value, expected, pos=e.pos)
            self._range_check(lit)
            return lit
        if isinstance(e, Hole):
            return Hole(expected, pos=e.pos)
        if isinstance(e, IfExpr):
            cond = self.check(e.cond, BOOL, env, ctx)
            then = self.check(e.then, expected, env, ctx)
            els = self.check(e.els, expected, env, ctx)
            return IfExpr(cond, then, els, pos=e.pos)
        if isinstance(e, Let):
            value, vt = self.infer(e.value, env, ctx)
            if vt is None:
                value, vt = self._force(value, BIGINT), BIGINT
            body = self.check(e.body, expected, {**env, e.name: vt}, ctx)
            return Let(e.name, value, body, pos=e.pos)
        if isinstance(e, MatchExpr):
            annotated, _ = self._infer_match(e, env, ctx, expected=expected)
            return annotated
        if isinstance(e, ConstructorApp):
            annotated, t = self._infer_ctor(e, env, ctx, expected=expected)
            if t != expected:
                raise TypecheckError(
                    f"expected {print_type(expected)}, found {print_type(t)}", e.pos
                )
            return annotated
        if isinstance(e, TupleExpr):
            if not isinstance(expected, TupleType) or len(expected.elems) != len(e.elems):
                annotated, t = self.infer(e, env, ctx)
                if t != expected:
                    raise TypecheckError(
                        f"expected {print_type(expected)}, found {print_type(t) if t else 'BigInt'}",
                        e.pos,
                    )
                return annotated
            elems = tuple(
                self.check(x, xt, env, ctx) for x, xt in zip(e.elems, expected.elems)
            )
            return TupleExpr(elems, pos=e.pos)
        annotated, t = self.infer(e, env, ctx)
        if t is None:
            if not _is_numeric(expected):
                raise TypecheckError(f"integer expression where {print_type(expected)} expected", e.pos)
            return self._force(annotated, expected)
        if t != expected:
            raise TypecheckError(
                f"expected {print_type(expected)}, found {print_type(t)}", e.pos
            )
        return annotated

    # ------------------------------------------------------------ helpers

    def _range_check(self, lit: Literal) -> None:
        if lit.type == INT and not (INT_MIN <= lit.value <= INT_MAX):
            raise TypecheckError(f"Int literal {lit.value} out of range", lit.pos)

    def _force(self, e: Expr, t: TypeRef) -> Expr:
        """Resolve every width-unresolved literal in a None-typed tree to t."""
        if isinstance(e, Literal):
            lit = Literal(e.value, t, pos=e.pos)
            self._range_check(lit)
            return lit
        if isinstance(e, BinaryOp):
            return BinaryOp(e.op, self._force(e.lhs, t), self._force(e.rhs, t), pos=e.pos)
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, self._force(e.operand, t), pos=e.pos)
        if isinstance(e, IfExpr):
            return IfExpr(e.cond, self._force(e.then, t), self._force(e.els, t), pos=e.pos)
        if isinstance(e, Let):
            return Let(e.name, e.value, self._force(e.body, t), pos=e.pos)
        if isinstance(e, MatchExpr):
            cases = tuple(MatchCase(c.pattern, self._force(c.body, t)) for c in e.cases)
            return MatchExpr(e.scrutinee, cases, pos=e.pos)
        raise AssertionError(f"unexpected unresolved node {type(e).__name__}")

    def _join(self, e1: Expr, t1: Optional[TypeRef], e2: Expr, t2: Optional[TypeRef], pos):
        if t1 is None and t2 is None:
            return e1, e2, None
        if t1 is None:
            if not _is_numeric(t2):
                raise TypecheckError(f"branches have different types", pos)
            return self._force(e1, t2), e2, t2
        if t2 is None:
            if not _is_numeric(t1):
                raise TypecheckError(f"branches have different types", pos)
            return e1, self._force(e2, t1), t1
        if t1 != t2:
            raise TypecheckError(
                f"branches have different types: {print_type(t1)} vs {print_type(t2)}", pos
            )
        return e1, e2, t1

    def _infer_binop(self, e: BinaryOp, env, ctx) -> tuple[Expr, Optional[TypeRef]]:
        op = e.op
        if op in ("&&", "||"):
            lhs = self.check(e.lhs, BOOL, env, ctx)
            rhs = self.check(e.rhs, BOOL, env, ctx)
            return BinaryOp(op, lhs, rhs, pos=e.pos), BOOL
        lhs, t1 = self.infer(e.lhs, env, ctx)
        rhs, t2 = self.infer(e.rhs, env, ctx)
        if op == "==":
            lhs, rhs, t = self._join(lhs, t1, rhs, t2, e.pos)
            if t is None:
                lhs, rhs = self._force(lhs, BIGINT), self._force(rhs, BIGINT)
            return BinaryOp("==", lhs, rhs, pos=e.pos), BOOL
        # arithmetic and orderings want numeric operands of equal width
        for t in (t1, t2):
            if t is not None and not _is_numeric(t):
                raise TypecheckError(f"{op} applied to {print_type(t)}", e.pos)
        lhs, rhs, t = self._join(lhs, t1, rhs, t2, e.pos)
        if op in ("<", "<="):
            if t is None:
                lhs, rhs = self._force(lhs, BIGINT), self._force(rhs, BIGINT)
            return BinaryOp(op, lhs, rhs, pos=e.pos), BOOL
        return BinaryOp(op, lhs, rhs, pos=e.pos), t

    def _infer_call(self, e: FunctionCall, env, ctx) -> tuple[Expr, TypeRef]:
        callee = self.prog.functions_by_name.get(e.name)
        if callee is None:
            raise TypecheckError(f"unknown function {e.name}", e.pos)
        if len(e.args) != len(callee.params):
            raise TypecheckError(
                f"{e.name} expects {len(callee.params)} argument(s), got {len(e.args)}", e.pos
            )
        if not callee.type_params:
            args = tuple(
                self.check(a, p.type, env, ctx) for a, p in zip(e.args, callee.params)
            )
            return FunctionCall(e.name, args, pos=e.pos), callee.return_type
        # polymorphic callee: infer the instantiation from argument types
        inferred: list[tuple[Expr, Optional[TypeRef]]] = [
            self.infer(a, env, ctx) for a in e.args
        ]
        subst: dict[str, TypeRef] = {}
        for (ae, at), p in zip(inferred, callee.params):
            if at is not None:
                _unify(p.type, at, subst, set(callee.type_params), e.pos)
        args = []
        for (ae, at), p in zip(inferred, callee.params):
            want = subst_type(p.type, subst)
            if at is None:
                if not _is_numeric(want):
                    raise TypecheckError(
                        f"cannot resolve literal width for argument of {e.name}", e.pos
                    )
                args.append(self._force(ae, want))
            else:
                if at != want:
                    raise TypecheckError(
                        f"argument of {e.name}: expected {print_type(want)}, found {print_type(at)}",
                        e.pos,
                    )
                args.append(ae)
        for tv in callee.type_params:
            if tv not in subst:
                raise TypecheckError(
                    f"cannot infer type argument {tv} of {e.name}", e.pos
                )
        return FunctionCall(e.name, tuple(args), pos=e.pos), subst_type(callee.return_type, subst)

    def _infer_ctor(self, e: ConstructorApp, env, ctx, expected: Optional[TypeRef]) -> tuple[Expr, TypeRef]:
        adt_name = self.prog.ctor_to_adt.get(e.ctor)
        if adt_name is None:
            raise TypecheckError(f"unknown constructor {e.ctor}", e.pos)
        adt = self.prog.adts_by_name[adt_name]
        ctor = self.prog.constructor(e.ctor)
        if len(e.args) != len(ctor.fields):
            raise TypecheckError(
                f"{e.ctor} expects {len(ctor.fields)} argument(s), got {len(e.args)}", e.pos
            )
        type_args: Optional[tuple[TypeRef, ...]] = e.type_args
        if type_args is None and expected is not None:
            if not (isinstance(expected, AdtType) and expected.name == adt_name):
                raise TypecheckError(
                    f"constructor {e.ctor} cannot produce {print_type(expected)}", e.pos
                )
            type_args = expected.args
        if type_args is not None:
            ftypes = ctor_field_types(self.prog, ctor, type_args)
            args = tuple(self.check(a, ft, env, ctx) for a, ft in zip(e.args, ftypes))
            return (
                ConstructorApp(e.ctor, args, type_args, pos=e.pos),
                AdtType(adt_name, type_args),
            )
        # no expectation: infer type arguments from the field values
        subst: dict[str, TypeRef] = {}
        inferred = [self.infer(a, env, ctx) for a in e.args]
        for (ae, at), f in zip(inferred, ctor.fields):
            if at is not None:
                _unify(f.type, at, subst, set(adt.type_params), e.pos)
        args = []
        for (ae, at), f in zip(inferred, ctor.fields):
            want = subst_type(f.type, subst)
            if at is None:
                if not _is_numeric(want):
                    raise TypecheckError(
                        f"cannot resolve literal width in {e.ctor}(...)", e.pos
                    )
                args.append(self._force(ae, want))
            else:
                if at != want:
                    raise TypecheckError(
                        f"field {f.name} of {e.ctor}: expected {print_type(want)}, found {print_type(at)}",
                        e.pos,
                    )
                args.append(ae)
        targs = []
        for tv in adt.type_params:
            if tv not in subst:
                raise TypecheckError(
                    f"cannot infer type arguments of {e.ctor}; annotate the context", e.pos
                )
            targs.append(subst[tv])
        return (
            ConstructorApp(e.ctor, tuple(args), tuple(targs), pos=e.pos),
            AdtType(adt_name, tuple(targs)),
        )

    def _infer_match(self, e: MatchExpr, env, ctx, expected: Optional[TypeRef]):
        scrut, st = self.infer(e.scrutinee, env, ctx)
        if st is None:
            scrut, st = self._force(scrut, BIGINT), BIGINT
        cases: list[MatchCase] = []
        if expected is not None:
            for c in e.cases:
                bindings = self.bind_pattern(c.pattern, st, e.pos)
                body = self.check(c.body, expected, {**env, **bindings}, ctx)
                cases.append(MatchCase(c.pattern, body))
            result: Optional[TypeRef] = expected
        else:
            typed: list[tuple[MatchCase, Optional[TypeRef]]] = []
            for c in e.cases:
                bindings = self.bind_pattern(c.pattern, st, e.pos)
                body, bt = self.infer(c.body, {**env, **bindings}, ctx)
                typed.append((MatchCase(c.pattern, body), bt))
            concrete = [bt for _, bt in typed if bt is not None]
            if not concrete:
                result = None
                cases = [c for c, _ in typed]
            else:
                result = concrete[0]
                for bt in concrete[1:]:
                    if bt != result:
                        raise TypecheckError("match cases have different types", e.pos)
                for c, bt in typed:
                    if bt is None:
                        if not _is_numeric(result):
                            raise TypecheckError("match cases have different types", e.pos)
                        c = MatchCase(c.pattern, self._force(c.body, result))
                    cases.append(c)
        if not _match_is_exhaustive(self.prog, st, [c.pattern for c in e.cases]):
            raise TypecheckError("match is not exhaustive", e.pos)
        return MatchExpr(scrut, tuple(cases), pos=e.pos), result

    def bind_pattern(self, p: Pattern, t: TypeRef, pos) -> dict[str, TypeRef]:
        out: dict[str, TypeRef] = {}

        def go(p: Pattern, t: TypeRef) -> None:
            if isinstance(p, WildcardPattern):
                return
            if isinstance(p, VarPattern):
                self._add_binding(out, p.name, t, pos)
                return
            if isinstance(p, TuplePattern):
                if not isinstance(t, TupleType) or len(t.elems) != len(p.elems):
                    raise TypecheckError(
                        f"tuple pattern does not match {print_type(t)}", pos
                    )
                if p.binder:
                    self._add_binding(out, p.binder, t, pos)
                for sub, st in zip(p.elems, t.elems):
                    go(sub, st)
                return
            assert isinstance(p, CtorPattern)
            adt_name = self.prog.ctor_to_adt.get(p.ctor)
            if adt_name is None:
                raise TypecheckError(f"unknown constructor {p.ctor}", pos)
            if not isinstance(t, AdtType) or t.name != adt_name:
                raise TypecheckError(
                    f"pattern {p.ctor}(...) does not match {print_type(t)}", pos
                )
            ctor = self.prog.constructor(p.ctor)
            if len(p.args) != len(ctor.fields):
                raise TypecheckError(
                    f"{p.ctor} expects {len(ctor.fields)} field(s), got {len(p.args)}", pos
                )
            if p.binder:
                self._add_binding(out, p.binder, t, pos)
            for sub, st in zip(p.args, ctor_field_types(self.prog, ctor, t.args)):
                go(sub, st)

        go(p, t)
        return out

    def _add_binding(self, out: dict[str, TypeRef], name: str, t: TypeRef, pos) -> None:
        if name in out:
            raise TypecheckError(f"duplicate pattern binder {name}", pos)
        out[name] = t


def _unify(param: TypeRef, arg: TypeRef, subst: dict[str, TypeRef], tvars: set[str], pos) -> None:
    if isinstance(param, TypeVar) and param.name in tvars:
        prev = subst.get(param.name)
        if prev is None:
            subst[param.name] = arg
        elif prev != arg:
            raise TypecheckError(
                f"conflicting instantiations for {param.name}: "
                f"{print_type(prev)} vs {print_type(arg)}",
                pos,
            )
        return
    if isinstance(param, AdtType) and isinstance(arg, AdtType) and param.name == arg.name:
        for p, a in zip(param.args, arg.args):
            _unify(p, a, subst, tvars, pos)
        return
    if isinstance(param, TupleType) and isinstance(arg, TupleType) and len(param.elems) == len(arg.elems):
        for p, a in zip(param.elems, arg.elems):
            _unify(p, a, subst, tvars, pos)
        return
    if param != arg:
        raise TypecheckError(
            f"expected {print_type(param)}, found {print_type(arg)}", pos
        )


# ------------------------------------------------------------- exhaustiveness

def _strip(p: Pattern) -> Pattern:
    if isinstance(p, TuplePattern) and p.binder:
        return TuplePattern(p.elems, None)
    if isinstance(p, CtorPattern) and p.binder:
        return CtorPattern(p.ctor, p.args, None)
    return p


def _match_is_exhaustive(prog: Program, scrut: TypeRef, patterns: list[Pattern]) -> bool:
    rows = [[_strip(p)] for p in patterns]
    return not _useful(prog, rows, [WildcardPattern()], [scrut])


def _useful(prog: Program, rows: list[list[Pattern]], q: list[Pattern], types: list[TypeRef]) -> bool:
    """Is the vector q useful (matchable) given the rows already tried?"""
    if not q:
        return not rows
    head, t = _strip(q[0]), types[0]
    if isinstance(head, CtorPattern):
        assert isinstance(t, AdtType)
        ctor = prog.constructor(head.ctor)
        ftypes = list(ctor_field_types(prog, ctor, t.args))
        return _useful(
            prog,
            _specialize_ctor(prog, rows, head.ctor, len(ctor.fields)),
            list(head.args) + q[1:],
            ftypes + types[1:],
        )
    if isinstance(head, TuplePattern):
        assert isinstance(t, TupleType)
        return _useful(
            prog,
            _specialize_tuple(rows, len(t.elems)),
            list(head.elems) + q[1:],
            list(t.elems) + types[1:],
        )
    # head is a wildcard or variable
    if isinstance(t, AdtType):
        seen = {
            _strip(r[0]).ctor
            for r in rows
            if isinstance(_strip(r[0]), CtorPattern)
        }
        adt = prog.adts_by_name[t.name]
        if seen and seen == {c.name for c in adt.constructors}:
            for c in adt.constructors:
                ftypes = list(ctor_field_types(prog, c, t.args))
                wilds: list[Pattern] = [WildcardPattern()] * len(c.fields)
                if _useful(
                    prog,
                    _specialize_ctor(prog, rows, c.name, len(c.fields)),
                    wilds + q[1:],
                    ftypes + types[1:],
                ):
                    return True
            return False
    elif isinstance(t, TupleType):
        if any(isinstance(_strip(r[0]), TuplePattern) for r in rows):
            wilds = [WildcardPattern()] * len(t.elems)
            return _useful(
                prog,
                _specialize_tuple(rows, len(t.elems)),
                wilds + q[1:],
                list(t.elems) + types[1:],
            )
    default = [r[1:] for r in rows if isinstance(_strip(r[0]), (WildcardPattern, VarPattern))]
    return _useful(prog, default, q[1:], types[1:])


def _specialize_ctor(prog: Program, rows: list[list[Pattern]], ctor: str, arity: int) -> list[list[Pattern]]:
    out = []
    for r in rows:
        head = _strip(r[0])
        if isinstance(head, CtorPattern):
            if head.ctor == ctor:
                out.append(list(head.args) + r[1:])
        elif isinstance(head, (WildcardPattern, VarPattern)):
            out.append([WildcardPattern()] * arity + r[1:])
    return out


def _specialize_tuple(rows: list[list[Pattern]], arity: int) -> list[list[Pattern]]:
    out = []
    for r in rows:
        head = _strip(r[0])
        if isinstance(head, TuplePattern):
            out.append(list(head.elems) + r[1:])
        elif isinstance(head, (WildcardPattern, VarPattern)):
            out.append([WildcardPattern()] * arity + r[1:])
    return out


# ------------------------------------------------------------------- driver

def resolve_program(prog: Program) -> Program:
    """Type-check and annotate a parsed program."""
    checker = Checker(prog)
    for adt in prog.adts:
        tvars = set(adt.type_params)
        if len(tvars) != len(adt.type_params):
            raise TypecheckError(f"duplicate type parameter in {adt.name}")
        for ctor in adt.constructors:
            names = [f.name for f in ctor.fields]
            if len(set(names)) != len(names):
                raise TypecheckError(f"duplicate field name in {ctor.name}")
            for f in ctor.fields:
                checker.check_type_wf(f.type, tvars)
    funs = []
    for f in prog.functions:
        tvars = set(f.type_params)
        for p in f.params:
            checker.check_type_wf(p.type, tvars)
        checker.check_type_wf(f.return_type, tvars)
        names = [p.name for p in f.params]
        if len(set(names)) != len(names):
            raise TypecheckError(f"duplicate parameter name in {f.name}")
        env = {p.name: p.type for p in f.params}
        ctx = _Ctx(prog, f)
        pre = None
        if f.precondition is not None:
            pre = checker.check(f.precondition, BOOL, env, ctx)
        if isinstance(f.body, Choose):
            if f.type_params:
                raise TypecheckError(
                    f"{f.name}: a choose body requires a monomorphic function", f.body.pos
                )
            cvars = f.body.vars
            for v in cvars:
                checker.check_type_wf(v.type, tvars, f.body.pos)
            if len(cvars) == 1:
                produced: TypeRef = cvars[0].type
            else:
                produced = TupleType(tuple(v.type for v in cvars))
            if produced != f.return_type:
                raise TypecheckError(
                    f"choose variables produce {print_type(produced)} but {f.name} "
                    f"returns {print_type(f.return_type)}",
                    f.body.pos,
                )
            cenv = {**env, **{v.name: v.type for v in cvars}}
            pred = checker.check(f.body.pred, BOOL, cenv, ctx)
            body: Expr = Choose(cvars, pred, pos=f.body.pos)
        else:
            body = checker.check(f.body, f.return_type, env, ctx)
        post = None
        if f.postcondition is not None:
            penv = {**env, f.postcondition.binder: f.return_type}
            post = Ensuring(
                f.postcondition.binder,
                checker.check(f.postcondition.pred, BOOL, penv, ctx),
            )
        funs.append(FunDef(f.name, f.params, f.return_type, body, pre, post, f.type_params))
    return Program(prog.adts, tuple(funs))


# --------------------------------------------------------- typed-tree queries

def type_of(e: Expr, env: dict[str, TypeRef], prog: Program) -> TypeRef:
    """Type of an already-annotated expression (literals carry widths)."""
    if isinstance(e, Literal):
        if isinstance(e.value, bool):
            return BOOL
        assert e.type is not None, "untyped literal in annotated tree"
        return e.type
    if isinstance(e, Variable):
        return env[e.name]
    if isinstance(e, BinaryOp):
        if e.op in ("&&", "||", "==", "<", "<="):
            return BOOL
        return type_of(e.lhs, env, prog)
    if isinstance(e, UnaryOp):
        return BOOL if e.op == "!" else type_of(e.operand, env, prog)
    if isinstance(e, IfExpr):
        return type_of(e.then, env, prog)
    if isinstance(e, Let):
        return type_of(e.body, {**env, e.name: type_of(e.value, env, prog)}, prog)
    if isinstance(e, MatchExpr):
        st = type_of(e.scrutinee, env, prog)
        c = e.cases[0]
        bindings = Checker(prog).bind_pattern(c.pattern, st, None)
        return type_of(c.body, {**env, **bindings}, prog)
    if isinstance(e, FunctionCall):
        callee = prog.functions_by_name[e.name]
        if not callee.type_params:
            return callee.return_type
        subst: dict[str, TypeRef] = {}
        for a, p in zip(e.args, callee.params):
            _unify(p.type, type_of(a, env, prog), subst, set(callee.type_params), None)
        return subst_type(callee.return_type, subst)
    if isinstance(e, ConstructorApp):
        assert e.type_args is not None, "unannotated constructor application"
        return AdtType(prog.ctor_to_adt[e.ctor], e.type_args)
    if isinstance(e, TupleExpr):
        return TupleType(tuple(type_of(x, env, prog) for x in e.elems))
    if isinstance(e, TupleSelect):
        bt = type_of(e.base, env, prog)
        assert isinstance(bt, TupleType)
        return bt.elems[e.index]
    if isinstance(e, FieldSelect):
        bt = type_of(e.base, env, prog)
        assert isinstance(bt, AdtType)
        adt = prog.adts_by_name[bt.name]
        for c in adt.constructors:
            for f, ft in zip(c.fields, ctor_field_types(prog, c, bt.args)):
                if f.name == e.field:
                    return ft
        raise KeyError(e.field)
    if isinstance(e, IsConstructor):
        return BOOL
    if isinstance(e, Hole):
        assert e.type is not None
        return e.type
    raise TypeError(f"no type for {type(e).__name__}")
