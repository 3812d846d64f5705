"""AST for the surface language: types, expressions, patterns, programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


# ---------------------------------------------------------------- types

class TypeRef:
    """Base class for type references."""

    __slots__ = ()


@dataclass(frozen=True)
class BoolType(TypeRef):
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class IntType(TypeRef):
    """Fixed-width 32-bit signed integers; overflow is an evaluation error."""

    def __str__(self) -> str:
        return "Int"


@dataclass(frozen=True)
class BigIntType(TypeRef):
    def __str__(self) -> str:
        return "BigInt"


@dataclass(frozen=True)
class TupleType(TypeRef):
    elems: tuple[TypeRef, ...]

    def __str__(self) -> str:
        return "(" + ", ".join(str(t) for t in self.elems) + ")"


@dataclass(frozen=True)
class AdtType(TypeRef):
    """A (possibly applied) reference to a declared algebraic data type."""

    name: str
    args: tuple[TypeRef, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return self.name + "[" + ", ".join(str(t) for t in self.args) + "]"


@dataclass(frozen=True)
class TypeVar(TypeRef):
    """A type variable; only legal before monomorphization."""

    name: str

    def __str__(self) -> str:
        return self.name


BOOL = BoolType()
INT = IntType()
BIGINT = BigIntType()


def subst_type(t: TypeRef, mapping: dict[str, TypeRef]) -> TypeRef:
    if isinstance(t, TypeVar):
        return mapping.get(t.name, t)
    if isinstance(t, TupleType):
        return TupleType(tuple(subst_type(e, mapping) for e in t.elems))
    if isinstance(t, AdtType) and t.args:
        return AdtType(t.name, tuple(subst_type(a, mapping) for a in t.args))
    return t


def type_vars_of(t: TypeRef) -> frozenset[str]:
    if isinstance(t, TypeVar):
        return frozenset((t.name,))
    if isinstance(t, TupleType):
        out: frozenset[str] = frozenset()
        for e in t.elems:
            out |= type_vars_of(e)
        return out
    if isinstance(t, AdtType):
        out = frozenset()
        for a in t.args:
            out |= type_vars_of(a)
        return out
    return frozenset()


# ---------------------------------------------------------------- declarations

@dataclass(frozen=True)
class FieldDef:
    name: str
    type: TypeRef


@dataclass(frozen=True)
class ConstructorDef:
    name: str
    fields: tuple[FieldDef, ...]


@dataclass(frozen=True)
class AdtDef:
    name: str
    type_params: tuple[str, ...]
    constructors: tuple[ConstructorDef, ...]


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class Expr:
    """Base class for expressions.  Nodes are immutable and hashable."""

    pos: Optional[tuple[int, int]] = field(
        default=None, compare=False, repr=False, kw_only=True
    )


@dataclass(frozen=True)
class Literal(Expr):
    """A Bool/Int/BigInt literal; `type` is None while an integer literal is
    still awaiting resolution against its context."""

    value: Union[bool, int]
    type: Optional[TypeRef] = None


@dataclass(frozen=True)
class Variable(Expr):
    name: str


BINARY_OPS = ("+", "-", "*", "div", "mod", "<", "<=", "==", "&&", "||")
UNARY_OPS = ("!", "neg")


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str
    operand: Expr


@dataclass(frozen=True)
class IfExpr(Expr):
    cond: Expr
    then: Expr
    els: Expr


@dataclass(frozen=True)
class Let(Expr):
    name: str
    value: Expr
    body: Expr


@dataclass(frozen=True)
class Pattern:
    pass


@dataclass(frozen=True)
class WildcardPattern(Pattern):
    pass


@dataclass(frozen=True)
class VarPattern(Pattern):
    name: str


@dataclass(frozen=True)
class TuplePattern(Pattern):
    elems: tuple[Pattern, ...]
    binder: Optional[str] = None


@dataclass(frozen=True)
class CtorPattern(Pattern):
    ctor: str
    args: tuple[Pattern, ...]
    binder: Optional[str] = None


@dataclass(frozen=True)
class MatchCase:
    pattern: Pattern
    body: Expr


@dataclass(frozen=True)
class MatchExpr(Expr):
    scrutinee: Expr
    cases: tuple[MatchCase, ...]


@dataclass(frozen=True)
class FunctionCall(Expr):
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class ConstructorApp(Expr):
    """Constructor application; `type_args` instantiate the ADT's parameters
    and may be None until the type checker resolves them."""

    ctor: str
    args: tuple[Expr, ...]
    type_args: Optional[tuple[TypeRef, ...]] = None


@dataclass(frozen=True)
class TupleExpr(Expr):
    elems: tuple[Expr, ...]


@dataclass(frozen=True)
class TupleSelect(Expr):
    base: Expr
    index: int  # zero-based


@dataclass(frozen=True)
class FieldSelect(Expr):
    base: Expr
    field: str


@dataclass(frozen=True)
class Param:
    name: str
    type: TypeRef


@dataclass(frozen=True)
class Choose(Expr):
    """Specification construct: `choose { (x: T, ...) => pred }`."""

    vars: tuple[Param, ...]
    pred: Expr


@dataclass(frozen=True)
class Hole(Expr):
    """The `???` placeholder filled in by `plug`."""

    type: Optional[TypeRef] = None


@dataclass(frozen=True)
class Unsolved(Expr):
    """Placeholder for a sibling subproblem with no solution yet; evaluating
    it is an error, which conservatively fails the candidate under test."""


@dataclass(frozen=True)
class IsConstructor(Expr):
    """Internal constructor test used in path conditions; printed as a match."""

    expr: Expr
    ctor: str


@dataclass(frozen=True)
class Ensuring:
    binder: str
    pred: Expr


@dataclass(frozen=True)
class FunDef:
    name: str
    params: tuple[Param, ...]
    return_type: TypeRef
    body: Expr
    precondition: Optional[Expr] = None
    postcondition: Optional[Ensuring] = None
    type_params: tuple[str, ...] = ()


@dataclass
class Program:
    """A parsed program.  Treated as immutable after construction."""

    adts: tuple[AdtDef, ...]
    functions: tuple[FunDef, ...]

    def __post_init__(self) -> None:
        self.adts_by_name = {a.name: a for a in self.adts}
        self.functions_by_name = {f.name: f for f in self.functions}
        self.ctor_to_adt: dict[str, str] = {}
        for a in self.adts:
            for c in a.constructors:
                self.ctor_to_adt[c.name] = a.name

    def constructor(self, name: str) -> ConstructorDef:
        adt = self.adts_by_name[self.ctor_to_adt[name]]
        for c in adt.constructors:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_function_body(self, name: str, body: Expr) -> "Program":
        """A copy of the program with `name`'s body replaced (ADTs shared)."""
        fns = tuple(
            FunDef(
                f.name, f.params, f.return_type, body,
                f.precondition, f.postcondition, f.type_params,
            )
            if f.name == name
            else f
            for f in self.functions
        )
        return Program(self.adts, fns)


# ---------------------------------------------------------------- size metric

def pattern_size(p: Pattern) -> int:
    if isinstance(p, (WildcardPattern, VarPattern)):
        return 1
    if isinstance(p, TuplePattern):
        return 1 + sum(pattern_size(q) for q in p.elems)
    if isinstance(p, CtorPattern):
        return 1 + sum(pattern_size(q) for q in p.args)
    raise TypeError(p)


def expr_size(e: Expr) -> int:
    """Total number of AST nodes in `e` (patterns included)."""
    if isinstance(e, (Literal, Variable, Hole, Unsolved)):
        return 1
    if isinstance(e, BinaryOp):
        return 1 + expr_size(e.lhs) + expr_size(e.rhs)
    if isinstance(e, UnaryOp):
        return 1 + expr_size(e.operand)
    if isinstance(e, IfExpr):
        return 1 + expr_size(e.cond) + expr_size(e.then) + expr_size(e.els)
    if isinstance(e, Let):
        return 1 + expr_size(e.value) + expr_size(e.body)
    if isinstance(e, MatchExpr):
        n = 1 + expr_size(e.scrutinee)
        for c in e.cases:
            n += pattern_size(c.pattern) + expr_size(c.body)
        return n
    if isinstance(e, (FunctionCall, ConstructorApp, TupleExpr)):
        args = e.args if not isinstance(e, TupleExpr) else e.elems
        return 1 + sum(expr_size(a) for a in args)
    if isinstance(e, (TupleSelect, FieldSelect)):
        return 1 + expr_size(e.base)
    if isinstance(e, Choose):
        return 1 + expr_size(e.pred)
    if isinstance(e, IsConstructor):
        return 1 + expr_size(e.expr)
    raise TypeError(e)


# ---------------------------------------------------------------- free variables

def pattern_binders(p: Pattern) -> frozenset[str]:
    if isinstance(p, WildcardPattern):
        return frozenset()
    if isinstance(p, VarPattern):
        return frozenset((p.name,))
    if isinstance(p, TuplePattern):
        out = frozenset((p.binder,)) if p.binder else frozenset()
        for q in p.elems:
            out |= pattern_binders(q)
        return out
    if isinstance(p, CtorPattern):
        out = frozenset((p.binder,)) if p.binder else frozenset()
        for q in p.args:
            out |= pattern_binders(q)
        return out
    raise TypeError(p)


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Variable):
        return frozenset((e.name,))
    if isinstance(e, (Literal, Hole, Unsolved)):
        return frozenset()
    if isinstance(e, BinaryOp):
        return free_vars(e.lhs) | free_vars(e.rhs)
    if isinstance(e, UnaryOp):
        return free_vars(e.operand)
    if isinstance(e, IfExpr):
        return free_vars(e.cond) | free_vars(e.then) | free_vars(e.els)
    if isinstance(e, Let):
        return free_vars(e.value) | (free_vars(e.body) - {e.name})
    if isinstance(e, MatchExpr):
        out = free_vars(e.scrutinee)
        for c in e.cases:
            out |= free_vars(c.body) - pattern_binders(c.pattern)
        return out
    if isinstance(e, FunctionCall):
        out = frozenset()
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, ConstructorApp):
        out = frozenset()
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, TupleExpr):
        out = frozenset()
        for a in e.elems:
            out |= free_vars(a)
        return out
    if isinstance(e, (TupleSelect, FieldSelect)):
        return free_vars(e.base)
    if isinstance(e, Choose):
        return free_vars(e.pred) - {v.name for v in e.vars}
    if isinstance(e, IsConstructor):
        return free_vars(e.expr)
    raise TypeError(e)


# ---------------------------------------------------------------- substitution

def _fresh_name(base: str, avoid: set[str]) -> str:
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


def _rename_pattern(p: Pattern, ren: dict[str, str]) -> Pattern:
    if isinstance(p, WildcardPattern):
        return p
    if isinstance(p, VarPattern):
        return VarPattern(ren.get(p.name, p.name))
    if isinstance(p, TuplePattern):
        b = ren.get(p.binder, p.binder) if p.binder else None
        return TuplePattern(tuple(_rename_pattern(q, ren) for q in p.elems), b)
    if isinstance(p, CtorPattern):
        b = ren.get(p.binder, p.binder) if p.binder else None
        return CtorPattern(p.ctor, tuple(_rename_pattern(q, ren) for q in p.args), b)
    raise TypeError(p)


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Capture-avoiding substitution of variables by expressions."""
    if not mapping:
        return e
    clash: set[str] = set()
    for v in mapping.values():
        clash |= free_vars(v)

    def go(e: Expr, m: dict[str, Expr]) -> Expr:
        if isinstance(e, Variable):
            return m.get(e.name, e)
        if isinstance(e, (Literal, Hole, Unsolved)):
            return e
        if isinstance(e, BinaryOp):
            return BinaryOp(e.op, go(e.lhs, m), go(e.rhs, m))
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, go(e.operand, m))
        if isinstance(e, IfExpr):
            return IfExpr(go(e.cond, m), go(e.then, m), go(e.els, m))
        if isinstance(e, Let):
            value = go(e.value, m)
            name, body = e.name, e.body
            inner = {k: v for k, v in m.items() if k != name}
            if name in clash and any(name in free_vars(v) for v in inner.values()):
                avoid = clash | free_vars(body) | set(inner)
                fresh = _fresh_name(name, avoid)
                body = substitute(body, {name: Variable(fresh)})
                name = fresh
            return Let(name, value, go(body, inner) if inner else body)
        if isinstance(e, MatchExpr):
            scrut = go(e.scrutinee, m)
            cases = []
            for c in e.cases:
                binders = pattern_binders(c.pattern)
                inner = {k: v for k, v in m.items() if k not in binders}
                pat, body = c.pattern, c.body
                bad = [b for b in binders if b in clash and any(b in free_vars(v) for v in inner.values())]
                if bad:
                    avoid = clash | free_vars(body) | set(inner) | set(binders)
                    ren = {}
                    for b in bad:
                        fresh = _fresh_name(b, avoid)
                        avoid.add(fresh)
                        ren[b] = fresh
                    pat = _rename_pattern(pat, ren)
                    body = substitute(body, {k: Variable(v) for k, v in ren.items()})
                cases.append(MatchCase(pat, go(body, inner) if inner else body))
            return MatchExpr(scrut, tuple(cases))
        if isinstance(e, FunctionCall):
            return FunctionCall(e.name, tuple(go(a, m) for a in e.args))
        if isinstance(e, ConstructorApp):
            return ConstructorApp(e.ctor, tuple(go(a, m) for a in e.args), e.type_args)
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(go(a, m) for a in e.elems))
        if isinstance(e, TupleSelect):
            return TupleSelect(go(e.base, m), e.index)
        if isinstance(e, FieldSelect):
            return FieldSelect(go(e.base, m), e.field)
        if isinstance(e, Choose):
            bound = {v.name for v in e.vars}
            inner = {k: v for k, v in m.items() if k not in bound}
            # choose binders are never renamed: they are output names
            return Choose(e.vars, go(e.pred, inner) if inner else e.pred)
        if isinstance(e, IsConstructor):
            return IsConstructor(go(e.expr, m), e.ctor)
        raise TypeError(e)

    return go(e, mapping)


# ---------------------------------------------------------------- helpers

TRUE = Literal(True, BOOL)
FALSE = Literal(False, BOOL)


def mk_and(*parts: Expr) -> Expr:
    out: list[Expr] = []
    for p in parts:
        if isinstance(p, Literal) and p.value is True:
            continue
        if isinstance(p, Literal) and p.value is False:
            return FALSE
        out.append(p)
    if not out:
        return TRUE
    acc = out[0]
    for p in out[1:]:
        acc = BinaryOp("&&", acc, p)
    return acc


def mk_or(*parts: Expr) -> Expr:
    out: list[Expr] = []
    for p in parts:
        if isinstance(p, Literal) and p.value is False:
            continue
        if isinstance(p, Literal) and p.value is True:
            return TRUE
        out.append(p)
    if not out:
        return FALSE
    acc = out[0]
    for p in out[1:]:
        acc = BinaryOp("||", acc, p)
    return acc


def conjuncts(e: Expr) -> list[Expr]:
    """Flatten a right- or left-nested `&&` chain into its conjuncts."""
    if isinstance(e, BinaryOp) and e.op == "&&":
        return conjuncts(e.lhs) + conjuncts(e.rhs)
    return [e]


def mk_if(cond: Expr, then: Expr, els: Expr) -> Expr:
    if isinstance(cond, Literal) and cond.value is True:
        return then
    if isinstance(cond, Literal) and cond.value is False:
        return els
    return IfExpr(cond, then, els)


def count_holes(e: Expr) -> int:
    if isinstance(e, Hole):
        return 1
    if isinstance(e, (Literal, Variable, Unsolved)):
        return 0
    if isinstance(e, BinaryOp):
        return count_holes(e.lhs) + count_holes(e.rhs)
    if isinstance(e, UnaryOp):
        return count_holes(e.operand)
    if isinstance(e, IfExpr):
        return count_holes(e.cond) + count_holes(e.then) + count_holes(e.els)
    if isinstance(e, Let):
        return count_holes(e.value) + count_holes(e.body)
    if isinstance(e, MatchExpr):
        return count_holes(e.scrutinee) + sum(count_holes(c.body) for c in e.cases)
    if isinstance(e, FunctionCall):
        return sum(count_holes(a) for a in e.args)
    if isinstance(e, ConstructorApp):
        return sum(count_holes(a) for a in e.args)
    if isinstance(e, TupleExpr):
        return sum(count_holes(a) for a in e.elems)
    if isinstance(e, (TupleSelect, FieldSelect)):
        return count_holes(e.base)
    if isinstance(e, Choose):
        return count_holes(e.pred)
    if isinstance(e, IsConstructor):
        return count_holes(e.expr)
    raise TypeError(e)
