"""Deductive decomposition rules.

A synthesis problem carries inputs, a path condition, a specification over
output variables, and the program it lives in.  Rules either close a problem
directly (ground_solve) or decompose it into subproblems together with a
recomposition function that assembles child solutions into a guarded term.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .checker import CheckConfig, Valid, find_counterexample
from .lang import (
    AdtType,
    BIGINT,
    BigIntType,
    BinaryOp,
    BOOL,
    Expr,
    FieldSelect,
    FunctionCall,
    INT,
    IntType,
    IsConstructor,
    Let,
    Literal,
    MatchCase,
    MatchExpr,
    Param,
    Program,
    TRUE,
    TupleExpr,
    TuplePattern,
    TupleSelect,
    TupleType,
    TypeRef,
    Variable,
    VarPattern,
    CtorPattern,
    conjuncts,
    free_vars,
    mk_and,
    mk_if,
    mk_or,
    substitute,
)
from .typecheck import ctor_field_types
from .values import I32, VCtor, Value, ValueEnumerator


# ------------------------------------------------------------ path condition

@dataclass(frozen=True)
class BoolFact:
    expr: Expr


@dataclass(frozen=True)
class Binding:
    """name <- expr, evaluated left to right after earlier conjuncts."""

    name: str
    expr: Expr
    type: TypeRef


@dataclass(frozen=True)
class TerminatesMarker:
    """Permission to call `fn` recursively once an argument shrinks."""

    fn: str
    args: tuple[Expr, ...]


PiConjunct = object  # BoolFact | Binding | TerminatesMarker


@dataclass(frozen=True)
class PathCondition:
    items: tuple = ()

    def conjoin(self, *extra) -> "PathCondition":
        return PathCondition(self.items + tuple(extra))

    def facts(self) -> list[Expr]:
        return [it.expr for it in self.items if isinstance(it, BoolFact)]

    def bindings(self) -> list[Binding]:
        return [it for it in self.items if isinstance(it, Binding)]

    def marker(self) -> Optional[TerminatesMarker]:
        for it in self.items:
            if isinstance(it, TerminatesMarker):
                return it
        return None

    def without_marker(self) -> "PathCondition":
        return PathCondition(
            tuple(it for it in self.items if not isinstance(it, TerminatesMarker))
        )

    def checker_items(self) -> tuple:
        """Fact/binding conjuncts in order; termination markers are proof
        obligations for the rec-call rule, not runtime checks."""
        out = []
        for it in self.items:
            if isinstance(it, BoolFact):
                out.append(("fact", it.expr))
            elif isinstance(it, Binding):
                out.append(("bind", it.name, it.expr))
        return tuple(out)

    def fixes_constructor(self, name: str) -> bool:
        for f in self.facts():
            for c in conjuncts(f):
                if isinstance(c, IsConstructor) and c.expr == Variable(name):
                    return True
        return False

    def describe(self) -> str:
        from .printer import print_expr

        parts = []
        for it in self.items:
            if isinstance(it, BoolFact):
                parts.append(print_expr(it.expr))
            elif isinstance(it, Binding):
                parts.append(f"{it.name} <- {print_expr(it.expr)}")
            else:
                args = ", ".join(print_expr(a) for a in it.args)
                parts.append(f"terminates({it.fn}({args}))")
        return " && ".join(parts) if parts else "true"


# ---------------------------------------------------------------- the problem

@dataclass(frozen=True)
class SynthesisProblem:
    program: Program
    fn_name: str
    inputs: tuple[Param, ...]
    outputs: tuple[Param, ...]
    pi: PathCondition
    spec: Expr

    def out_type(self) -> TypeRef:
        if len(self.outputs) == 1:
            return self.outputs[0].type
        return TupleType(tuple(o.type for o in self.outputs))

    def scope(self) -> list[Param]:
        """Inputs followed by path-condition bindings, in order."""
        return list(self.inputs) + [
            Param(b.name, b.type) for b in self.pi.bindings()
        ]

    def describe(self) -> str:
        from .printer import print_expr

        ins = ", ".join(p.name for p in self.inputs)
        outs = ", ".join(p.name for p in self.outputs)
        return f"[{ins} <{self.pi.describe()} |> {print_expr(self.spec)}> {outs}]"


@dataclass(frozen=True)
class Solution:
    pre: Expr
    term: Expr


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    key: str
    subproblems: tuple[SynthesisProblem, ...]
    recompose: Callable = field(compare=False)

    @property
    def fingerprint(self) -> tuple[str, str]:
        return (self.rule, self.key)


def make_initial_problem(prog: Program, fn_name: str) -> SynthesisProblem:
    """Root problem for a function whose body is a choose specification."""
    from .lang import Choose

    fn = prog.functions_by_name[fn_name]
    body = fn.body
    if not isinstance(body, Choose):
        raise ValueError(f"{fn_name} has no choose specification")
    outputs = tuple(body.vars)
    spec = body.pred
    if fn.postcondition is not None:
        out_expr: Expr
        if len(outputs) == 1:
            out_expr = Variable(outputs[0].name)
        else:
            out_expr = TupleExpr(tuple(Variable(o.name) for o in outputs))
        post = substitute(fn.postcondition.pred, {fn.postcondition.binder: out_expr})
        spec = mk_and(spec, post)
    items: list = []
    if fn.precondition is not None:
        for c in conjuncts(fn.precondition):
            items.append(BoolFact(c))
    items.append(TerminatesMarker(fn_name, tuple(Variable(p.name) for p in fn.params)))
    return SynthesisProblem(
        program=prog,
        fn_name=fn_name,
        inputs=tuple(fn.params),
        outputs=outputs,
        pi=PathCondition(tuple(items)),
        spec=spec,
    )


# ----------------------------------------------------------------- ground rule

def value_to_expr(prog: Program, v: Value, t: TypeRef) -> Expr:
    if isinstance(v, bool):
        return Literal(v, BOOL)
    if isinstance(v, I32):
        return Literal(v.v, INT)
    if isinstance(v, int):
        return Literal(v, BIGINT)
    if isinstance(v, tuple):
        assert isinstance(t, TupleType)
        return TupleExpr(
            tuple(value_to_expr(prog, x, et) for x, et in zip(v, t.elems))
        )
    assert isinstance(v, VCtor) and isinstance(t, AdtType)
    from .lang import ConstructorApp

    ctor = prog.constructor(v.ctor)
    fts = ctor_field_types(prog, ctor, t.args)
    return ConstructorApp(
        v.ctor,
        tuple(value_to_expr(prog, x, ft) for x, ft in zip(v.args, fts)),
        t.args,
    )


def ground_solve(problem: SynthesisProblem, cfg: CheckConfig) -> Optional[Solution]:
    """Close the problem with a constant term when one satisfies the spec on
    every admissible input within the checking bound."""
    if _pi_calls(problem.pi, problem.fn_name):
        return None
    enum = ValueEnumerator(problem.program)
    pi_items = problem.pi.checker_items()
    out_t = problem.out_type()
    for v in enum.up_to(out_t, cfg.input_depth):
        term = value_to_expr(problem.program, v, out_t)
        if len(problem.outputs) == 1:
            binds = (( problem.outputs[0].name, term),)
        else:
            assert isinstance(term, TupleExpr)
            binds = tuple(
            (o.name, el) for o, el in zip(problem.outputs, term.elems)
            )
        verdict = find_counterexample(
            problem.program, problem.inputs, pi_items, binds, problem.spec, cfg,
            enumerator=enum,
        )
        if isinstance(verdict, Valid):
            return Solution(TRUE, term)
    return None


def _pi_calls(pi: PathCondition, fn_name: str) -> bool:
    def calls(e: Expr) -> bool:
        import dataclasses

        if isinstance(e, FunctionCall) and e.name == fn_name:
            return True
        for f in dataclasses.fields(e):
            v = getattr(e, f.name)
            if isinstance(v, Expr) and calls(v):
                return True
            if isinstance(v, tuple):
                for x in v:
                    if isinstance(x, Expr) and calls(x):
                        return True
                    body = getattr(x, "body", None)
                    if isinstance(body, Expr) and calls(body):
                        return True
        return False

    for b in pi.bindings():
        if calls(b.expr):
            return True
    return False


# ----------------------------------------------------------- split disjunction

def split_disjunction(problem: SynthesisProblem) -> Optional[RuleApplication]:
    spec = problem.spec
    if not (isinstance(spec, BinaryOp) and spec.op == "||"):
        return None
    left = replace(problem, spec=spec.lhs)
    right = replace(problem, spec=spec.rhs)

    def recompose(sols) -> Solution:
        s1, s2 = sols
        return Solution(
            mk_or(s1.pre, s2.pre),
            mk_if(s1.pre, s1.term, s2.term),
        )

    return RuleApplication("split_disjunction", "", (left, right), recompose)


# ------------------------------------------------------------- ADT case split

def _fresh_binder(base: str, taken: set[str]) -> str:
    letter = base[0].lower() if base else "v"
    k = 0
    while f"{letter}{k}" in taken:
        k += 1
    name = f"{letter}{k}"
    taken.add(name)
    return name


def case_split_candidates(problem: SynthesisProblem) -> list[str]:
    """Variables eligible for a constructor case split, inputs first."""
    out = []
    for p in problem.scope():
        t = p.type
        if not isinstance(t, AdtType):
            continue
        adt = problem.program.adts_by_name[t.name]
        if len(adt.constructors) < 2:
            continue
        if problem.pi.fixes_constructor(p.name):
            continue
        out.append(p.name)
    return out


def case_split_adt(problem: SynthesisProblem, var_name: str) -> RuleApplication:
    scope = {p.name: p.type for p in problem.scope()}
    t = scope[var_name]
    assert isinstance(t, AdtType)
    prog = problem.program
    adt = prog.adts_by_name[t.name]
    taken = set(scope) | {o.name for o in problem.outputs}

    subproblems = []
    case_patterns = []
    for ctor in adt.constructors:
        fts = ctor_field_types(prog, ctor, t.args)
        extra: list = [BoolFact(IsConstructor(Variable(var_name), ctor.name))]
        pat_args = []
        for fld, ft in zip(ctor.fields, fts):
            name = _fresh_binder(fld.name, taken)
            extra.append(Binding(name, FieldSelect(Variable(var_name), fld.name), ft))
            if isinstance(ft, TupleType):
                comps = []
                for i, ct in enumerate(ft.elems):
                    cname = f"{name}_{i + 1}"
                    taken.add(cname)
                    extra.append(Binding(cname, TupleSelect(Variable(name), i), ct))
                    comps.append(VarPattern(cname))
                pat_args.append(TuplePattern(tuple(comps), binder=name))
            else:
                pat_args.append(VarPattern(name))
        case_patterns.append(CtorPattern(ctor.name, tuple(pat_args)))
        subproblems.append(replace(problem, pi=problem.pi.conjoin(*extra)))

    def recompose(sols) -> Solution:
        cases = tuple(
            MatchCase(pat, s.term) for pat, s in zip(case_patterns, sols)
        )
        term = MatchExpr(Variable(var_name), cases)
        if all(s.pre == TRUE for s in sols):
            pre = TRUE
        else:
            pre = mk_or(*[
                mk_and(IsConstructor(Variable(var_name), c.name), s.pre)
                for c, s in zip(adt.constructors, sols)
            ])
        return Solution(pre, term)

    return RuleApplication("case_split_adt", var_name, tuple(subproblems), recompose)


# -------------------------------------------------------- recursive call rule

def _entails_cmp(pi: PathCondition, e: Expr, positive: bool) -> bool:
    """Does the path condition syntactically contain e > 0 (resp. e < 0)?"""
    for f in pi.facts():
        for c in conjuncts(f):
            if not isinstance(c, BinaryOp):
                continue
            if positive:
                # e > 0 arrives as 0 < e; also accept 1 <= e
                if c.op == "<" and _is_int_lit(c.lhs, 0) and c.rhs == e:
                    return True
                if c.op == "<=" and _is_int_lit(c.lhs, 1) and c.rhs == e:
                    return True
            else:
                if c.op == "<" and c.lhs == e and _is_int_lit(c.rhs, 0):
                    return True
                if c.op == "<=" and c.lhs == e and _is_int_lit(c.rhs, -1):
                    return True
    return False


def _is_int_lit(e: Expr, n: int) -> bool:
    return isinstance(e, Literal) and not isinstance(e.value, bool) and e.value == n


def _alias_map(pi: PathCondition) -> dict[Expr, str]:
    return {b.expr: b.name for b in pi.bindings()}


def args_smaller(e: Expr, t: TypeRef, pi: PathCondition, prog: Program) -> list[Expr]:
    """Expressions denoting values strictly smaller than e, by type:
    positive integers shrink by one, negative grow by one, and constructor
    values yield their same-typed fields (transitively)."""
    aliases = _alias_map(pi)

    def norm(x: Expr) -> Expr:
        name = aliases.get(x)
        return Variable(name) if name is not None else x

    def go(a: Expr, at: TypeRef) -> list[Expr]:
        if isinstance(at, (IntType, BigIntType)):
            one = Literal(1, at)
            if _entails_cmp(pi, a, positive=True):
                return [BinaryOp("-", a, one)]
            if _entails_cmp(pi, a, positive=False):
                return [BinaryOp("+", a, one)]
            return []
        if isinstance(at, AdtType):
            ctor_name = _known_ctor(pi, a)
            if ctor_name is None:
                return []
            ctor = prog.constructor(ctor_name)
            fts = ctor_field_types(prog, ctor, at.args)
            out = []
            for fld, ft in zip(ctor.fields, fts):
                if ft != at:
                    continue
                f_expr = norm(FieldSelect(a, fld.name))
                out.append(f_expr)
                out.extend(go(f_expr, ft))
            return out
        return []

    return go(norm(e), t)


def _known_ctor(pi: PathCondition, e: Expr) -> Optional[str]:
    for f in pi.facts():
        for c in conjuncts(f):
            if isinstance(c, IsConstructor) and c.expr == e:
                return c.ctor
    return None


def introduce_rec_calls(problem: SynthesisProblem) -> list[RuleApplication]:
    """One application per (argument position, smaller argument expression);
    consumes the termination marker and binds rec to the recursive call."""
    marker = problem.pi.marker()
    if marker is None:
        return []
    prog = problem.program
    fn = prog.functions_by_name[marker.fn]
    taken = {p.name for p in problem.scope()} | {o.name for o in problem.outputs}
    rec_name = "rec"
    k = 0
    while rec_name in taken:
        k += 1
        rec_name = f"rec{k}"

    from .printer import print_expr

    apps = []
    seen = set()
    for i, (param, arg) in enumerate(zip(fn.params, marker.args)):
        for smaller in args_smaller(arg, param.type, problem.pi, prog):
            key = f"{i}:{print_expr(smaller)}"
            if key in seen:
                continue
            seen.add(key)
            new_args = tuple(
                smaller if j == i else a for j, a in enumerate(marker.args)
            )
            call = FunctionCall(marker.fn, new_args)
            pi2 = problem.pi.without_marker().conjoin(
                Binding(rec_name, call, fn.return_type)
            )
            sub = replace(problem, pi=pi2)

            def recompose(sols, call=call, rec_name=rec_name) -> Solution:
                (s,) = sols
                pre = s.pre
                if rec_name in free_vars(pre):
                    pre = substitute(pre, {rec_name: call})
                return Solution(pre, Let(rec_name, call, s.term))

            apps.append(RuleApplication("introduce_rec_calls", key, (sub,), recompose))
    return apps
