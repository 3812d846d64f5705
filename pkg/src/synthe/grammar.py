"""Attributed term grammars.

Nonterminals are a type plus attributes; attribute rewriting suppresses
redundant candidate terms before they are ever built:

  * Ground/NonGround  - no all-ground terms under the top-level symbol;
  * NoOperator(f)     - associative operators associate to the left;
  * NonNeutral(e)     - no operator applied to its neutral/absorbing literal;
  * Sized(s)          - exact-size strata, left-heavy commutative operands.

`unfold(g, n)` returns every candidate of exact size n, deterministically,
with memoization per attributed nonterminal.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .lang import (
    AdtType,
    BIGINT,
    BigIntType,
    BinaryOp,
    BOOL,
    BoolType,
    Expr,
    FunctionCall,
    INT,
    IntType,
    Literal,
    Param,
    Program,
    TupleExpr,
    TupleType,
    TypeRef,
    UnaryOp,
    Variable,
)
from .printer import print_expr
from .typecheck import ctor_field_types


# ------------------------------------------------------------------ attributes

@dataclass(frozen=True)
class Sized:
    s: int


@dataclass(frozen=True)
class NoOperator:
    op: str


@dataclass(frozen=True)
class Ground:
    pass


@dataclass(frozen=True)
class NonGround:
    pass


@dataclass(frozen=True)
class NonNeutral:
    lit: Expr


GROUND = Ground()
NONGROUND = NonGround()

Attrs = frozenset


@dataclass(frozen=True)
class Nonterminal:
    type: TypeRef
    attrs: Attrs

    def with_attrs(self, *extra) -> "Nonterminal":
        return Nonterminal(self.type, self.attrs | frozenset(extra))

    def sized(self) -> Optional[int]:
        for a in self.attrs:
            if isinstance(a, Sized):
                return a.s
        return None

    def describe(self) -> str:
        from .printer import print_type

        parts = []
        for a in sorted(self.attrs, key=_attr_key):
            if isinstance(a, Sized):
                parts.append(f"|{a.s}|")
            elif isinstance(a, Ground):
                parts.append("G")
            elif isinstance(a, NonGround):
                parts.append("!G")
            elif isinstance(a, NoOperator):
                parts.append(f"!{a.op}")
            else:
                parts.append(f"!={print_expr(a.lit)}")
        inner = ",".join(parts)
        return print_type(self.type) + ("{" + inner + "}" if inner else "")


def _attr_key(a) -> tuple:
    if isinstance(a, Sized):
        return (0, a.s, "")
    if isinstance(a, Ground):
        return (1, 0, "")
    if isinstance(a, NonGround):
        return (1, 1, "")
    if isinstance(a, NoOperator):
        return (2, 0, a.op)
    return (3, 0, print_expr(a.lit))


# ----------------------------------------------------------------- productions

@dataclass(frozen=True)
class Production:
    """One base production T ::= f(T1, ..., Tn); cost (size of f) is 1."""

    kind: str  # "const" | "var" | "op" | "unop" | "tuple" | "ctor" | "call"
    name: str  # operator symbol, variable/constructor/function name, or ""
    operand_types: tuple[TypeRef, ...] = ()
    const_expr: Optional[Expr] = None
    type_args: Optional[tuple[TypeRef, ...]] = None  # for ctor productions
    commutative: bool = False
    associative: bool = False
    # banned literal operands per position (neutral/absorbing elements of f)
    neutrals: tuple = ()

    def arity(self) -> int:
        return len(self.operand_types)

    def ground_leaf(self) -> bool:
        """Nullary productions that denote constants (literals, nullary
        constructors, zero-argument calls)."""
        return self.arity() == 0 and self.kind != "var"

    def build(self, operands: tuple[Expr, ...]) -> Expr:
        if self.kind == "const":
            assert self.const_expr is not None
            return self.const_expr
        if self.kind == "var":
            return Variable(self.name)
        if self.kind == "op":
            return BinaryOp(self.name, operands[0], operands[1])
        if self.kind == "unop":
            return UnaryOp(self.name, operands[0])
        if self.kind == "tuple":
            return TupleExpr(operands)
        if self.kind == "ctor":
            from .lang import ConstructorApp

            return ConstructorApp(self.name, operands, self.type_args)
        assert self.kind == "call"
        return FunctionCall(self.name, operands)

    def describe(self) -> str:
        if self.kind == "const":
            return print_expr(self.const_expr)
        if self.kind == "var":
            return self.name
        if self.kind == "op":
            return f"_ {self.name} _"
        if self.kind == "unop":
            return f"{self.name}_"
        if self.kind == "tuple":
            return "(" + ", ".join("_" for _ in self.operand_types) + ")"
        return self.name + "(" + ", ".join("_" for _ in self.operand_types) + ")"


@dataclass(frozen=True)
class Expansion:
    """A production specialized to attributed operand nonterminals."""

    production: Production
    operands: tuple[Nonterminal, ...]


class Grammar:
    def __init__(self, productions: dict[TypeRef, tuple[Production, ...]], start: TypeRef):
        self.productions = productions
        self.start = start
        self._memo: dict[Nonterminal, tuple[Expr, ...]] = {}
        self._lock = threading.Lock()

    def raw(self, t: TypeRef) -> tuple[Production, ...]:
        return self.productions.get(t, ())


# -------------------------------------------------------------- construction

_NUMERIC_OPS = ("+", "-")
_CMP_OPS = ("==", "<", "<=")


def _zero_one(t: TypeRef) -> list[Expr]:
    return [Literal(0, t), Literal(1, t)]


def _spec_literals(spec: Expr) -> list[Expr]:
    """Distinct typed literals mentioned in the specification, in order."""
    import dataclasses

    out: list[Expr] = []

    def go(e: Expr) -> None:
        if isinstance(e, Literal):
            lit = Literal(e.value, e.type)
            if lit not in out:
                out.append(lit)
            return
        for f in dataclasses.fields(e):
            v = getattr(e, f.name)
            if isinstance(v, Expr):
                go(v)
            elif isinstance(v, tuple):
                for item in v:
                    if isinstance(item, Expr):
                        go(item)
                    elif hasattr(item, "body") and isinstance(item.body, Expr):
                        go(item.body)

    go(spec)
    return out


def type_universe(
    prog: Program,
    seed: Iterable[TypeRef],
    synth_fn: str,
) -> tuple[list[TypeRef], list[str]]:
    """Closure of the seed types under ADT fields, tuple components, and the
    parameter types of admissible helper functions; plus the admitted helper
    names.  Bool is always present."""
    universe: list[TypeRef] = []
    functions: list[str] = []

    def add(t: TypeRef) -> None:
        if t in universe:
            return
        universe.append(t)
        if isinstance(t, TupleType):
            for e in t.elems:
                add(e)
        elif isinstance(t, AdtType):
            adt = prog.adts_by_name[t.name]
            for c in adt.constructors:
                for ft in ctor_field_types(prog, c, t.args):
                    add(ft)

    add(BOOL)
    for t in seed:
        add(t)
    changed = True
    while changed:
        changed = False
        for f in prog.functions:
            if f.name == synth_fn or f.name in functions:
                continue
            if f.return_type in universe:
                functions.append(f.name)
                for p in f.params:
                    add(p.type)
                changed = True
    return universe, functions


def base_grammar(
    prog: Program,
    synth_fn: str,
    inputs: tuple[Param, ...],
    bindings: tuple[Param, ...],
    outputs: tuple[Param, ...],
    spec: Expr,
) -> Grammar:
    """Problem-specific grammar: operators, literals, in-scope variables,
    tuple/constructor forms, and calls to helper functions.  The function
    under synthesis never appears."""
    out_type = outputs[0].type if len(outputs) == 1 else TupleType(tuple(o.type for o in outputs))
    seed = [p.type for p in inputs] + [b.type for b in bindings] + [out_type]
    universe, helper_fns = type_universe(prog, seed, synth_fn)

    pool = _zero_one(INT) + _zero_one(BIGINT) + [Literal(False, BOOL), Literal(True, BOOL)]
    for lit in _spec_literals(spec):
        if lit not in pool:
            pool.append(lit)

    scope = list(inputs) + list(bindings)
    var_types = [p.type for p in scope]

    productions: dict[TypeRef, list[Production]] = {t: [] for t in universe}

    def op_production(op: str, t: TypeRef) -> Production:
        zero = Literal(0, t)
        if op == "+":
            return Production(
                "op", "+", (t, t), commutative=True, associative=True,
                neutrals=(frozenset([zero]), frozenset([zero])),
            )
        assert op == "-"
        return Production(
            "op", "-", (t, t), neutrals=(frozenset(), frozenset([zero])),
        )

    for t in universe:
        plist = productions[t]
        # operators first, echoing the type-directed grammar presentation
        if isinstance(t, (IntType, BigIntType)):
            for op in _NUMERIC_OPS:
                plist.append(op_production(op, t))
        if isinstance(t, BoolType):
            true, false = Literal(True, BOOL), Literal(False, BOOL)
            both = frozenset([true, false])
            plist.append(Production("op", "&&", (t, t), commutative=True,
                                    associative=True, neutrals=(both, both)))
            plist.append(Production("op", "||", (t, t), commutative=True,
                                    associative=True, neutrals=(both, both)))
            plist.append(Production("unop", "!", (t,)))
            # comparisons over the types of in-scope variables
            cmp_types: list[TypeRef] = []
            for vt in var_types:
                if vt not in cmp_types and not isinstance(vt, BoolType):
                    cmp_types.append(vt)
            for vt in cmp_types:
                plist.append(Production("op", "==", (vt, vt), commutative=True))
            for vt in cmp_types:
                if isinstance(vt, (IntType, BigIntType)):
                    plist.append(Production("op", "<", (vt, vt)))
                    plist.append(Production("op", "<=", (vt, vt)))
        # literals
        for lit in pool:
            lt = BOOL if isinstance(lit.value, bool) else lit.type
            if lt == t:
                plist.append(Production("const", print_expr(lit), const_expr=lit))
        # in-scope variables
        for p in scope:
            if p.type == t:
                plist.append(Production("var", p.name))
        # structural forms
        if isinstance(t, TupleType):
            plist.append(Production("tuple", "", tuple(t.elems)))
        if isinstance(t, AdtType):
            adt = prog.adts_by_name[t.name]
            for c in adt.constructors:
                fts = ctor_field_types(prog, c, t.args)
                plist.append(Production("ctor", c.name, tuple(fts), type_args=t.args))
        # helper calls returning t
        for fname in helper_fns:
            f = prog.functions_by_name[fname]
            if f.return_type == t:
                plist.append(
                    Production("call", fname, tuple(p.type for p in f.params))
                )

    return Grammar({t: tuple(ps) for t, ps in productions.items()}, out_type)


def problem_grammar(problem) -> Grammar:
    """Grammar for a synthesis problem: inputs plus path-condition bindings
    are the variable sources."""
    bindings = tuple(Param(b.name, b.type) for b in problem.pi.bindings())
    return base_grammar(
        problem.program,
        problem.fn_name,
        tuple(problem.inputs),
        bindings,
        tuple(problem.outputs),
        problem.spec,
    )


# ----------------------------------------------------------------- expansion

def _partitions(total: int, k: int, left_heavy: bool) -> Iterable[tuple[int, ...]]:
    """All k-tuples of positive sizes summing to total, lexicographic."""
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - (k - 1) + 1):
        for rest in _partitions(total - first, k - 1, left_heavy):
            t = (first,) + rest
            if left_heavy and any(t[i] < t[i + 1] for i in range(k - 1)):
                continue
            yield t


def _ground_combos(n: int, head_nonground: bool) -> Iterable[tuple]:
    if not head_nonground:
        yield (GROUND,) * n
        return
    import itertools

    for combo in itertools.product((NONGROUND, GROUND), repeat=n):
        if NONGROUND in combo:
            yield combo


def expand_productions(nt: Nonterminal, g: Grammar) -> list[Expansion]:
    size = nt.sized()
    assert size is not None, "expansion is size-driven"
    is_ground = GROUND in nt.attrs
    is_nonground = NONGROUND in nt.attrs
    banned_ops = {a.op for a in nt.attrs if isinstance(a, NoOperator)}
    banned_lits = {a.lit for a in nt.attrs if isinstance(a, NonNeutral)}

    out: list[Expansion] = []
    for p in g.raw(nt.type):
        # (b) NoOperator removals
        if p.kind in ("op", "unop") and p.name in banned_ops:
            continue
        # (c) NonNeutral removals of banned literal productions
        if p.kind == "const" and p.const_expr in banned_lits:
            continue
        # (a) Ground / NonGround removals
        if is_nonground and p.ground_leaf():
            continue
        if is_ground and p.kind == "var":
            continue
        n = p.arity()
        if n == 0:
            if size == 1:
                out.append(Expansion(p, ()))
            continue
        for combo in _ground_combos(n, is_nonground):
            for sizes in _partitions(size - 1, n, p.commutative):
                operands = []
                for i in range(n):
                    attrs = [combo[i], Sized(sizes[i])]
                    if p.associative and i == n - 1:
                        attrs.append(NoOperator(p.name))
                    if i < len(p.neutrals):
                        for lit in sorted(p.neutrals[i], key=print_expr):
                            attrs.append(NonNeutral(lit))
                    operands.append(Nonterminal(p.operand_types[i], frozenset(attrs)))
                out.append(Expansion(p, tuple(operands)))
    return out


def _canon_key(e: Expr) -> str:
    return print_expr(e)


def enumerate_nt(nt: Nonterminal, g: Grammar) -> tuple[Expr, ...]:
    with g._lock:
        got = g._memo.get(nt)
    if got is not None:
        return got
    import itertools

    out: list[Expr] = []
    for exp in expand_productions(nt, g):
        p = exp.production
        if not exp.operands:
            out.append(p.build(()))
            continue
        columns = [enumerate_nt(op, g) for op in exp.operands]
        if any(not c for c in columns):
            continue
        equal_sizes = (
            p.commutative
            and len(exp.operands) == 2
            and exp.operands[0].sized() == exp.operands[1].sized()
        )
        for operands in itertools.product(*columns):
            if equal_sizes and _canon_key(operands[0]) > _canon_key(operands[1]):
                continue
            out.append(p.build(tuple(operands)))
    result = tuple(out)
    with g._lock:
        # at-most-once per key: first writer wins, others recomputed equal
        existing = g._memo.get(nt)
        if existing is not None:
            return existing
        g._memo[nt] = result
    return result


def unfold(g: Grammar, n: int, top_type: Optional[TypeRef] = None) -> tuple[Expr, ...]:
    """All candidate expressions of exact size n (top level is NonGround)."""
    t = top_type if top_type is not None else g.start
    return enumerate_nt(Nonterminal(t, frozenset([NONGROUND, Sized(n)])), g)


def dump_grammar(g: Grammar, max_size: int) -> str:
    """Tab-separated stratum listing for --dump-grammar."""
    lines: list[str] = []
    for n in range(1, max_size + 1):
        top = Nonterminal(g.start, frozenset([NONGROUND, Sized(n)]))
        for exp in expand_productions(top, g):
            ops = " ".join(o.describe() for o in exp.operands)
            lines.append(f"{n}\t{exp.production.describe()}\t{ops}")
        lines.append(f"{n}\ttotal\t{len(unfold(g, n))}")
    return "\n".join(lines) + "\n"
