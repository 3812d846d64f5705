"""SMT-LIB2 emission of checker queries.

Bounded checking answers queries at desk scale; these scripts preserve a
path to full proofs with an external solver.  Validate-mode scripts assert
the path condition plus the negated spec under a candidate (unsat = valid);
satisfy-mode scripts assert the path condition plus the spec under any of
the given candidates (sat = some candidate is plausible).

Int is emitted as the unbounded SMT integer sort; 32-bit wrapping is not
modeled.  Functions whose body is still a choose specification become
uninterpreted functions.
"""
from __future__ import annotations

import os
from typing import Optional, Sequence

from .lang import (
    AdtType,
    BigIntType,
    BinaryOp,
    BoolType,
    Choose,
    ConstructorApp,
    CtorPattern,
    Expr,
    FieldSelect,
    FunctionCall,
    Hole,
    IfExpr,
    IntType,
    IsConstructor,
    Let,
    Literal,
    MatchExpr,
    Pattern,
    Program,
    TuplePattern,
    TupleExpr,
    TupleSelect,
    TupleType,
    TypeRef,
    UnaryOp,
    Unsolved,
    Variable,
    VarPattern,
    WildcardPattern,
)
from .mono import mangle_type
from .typecheck import ctor_field_types, type_of


class SmtError(Exception):
    pass


def sort_name(t: TypeRef) -> str:
    if isinstance(t, BoolType):
        return "Bool"
    if isinstance(t, (IntType, BigIntType)):
        return "Int"
    return mangle_type(t)


def _ctor_name(ctor: str, sort: str) -> str:
    return f"{ctor}_{sort}"


def _field_name(ctor: str, sort: str, fld: str) -> str:
    return f"{ctor}_{sort}_{fld}"


def _tuple_field(sort: str, i: int) -> str:
    return f"{sort}_{i + 1}"


class _Emitter:
    def __init__(self, prog: Program):
        self.prog = prog
        self.datatypes: dict[str, TypeRef] = {}  # sort name -> type
        self.uses_div = False

    # ------------------------------------------------------------- types

    def note_type(self, t: TypeRef) -> None:
        if isinstance(t, (BoolType, IntType, BigIntType)):
            return
        name = sort_name(t)
        if name in self.datatypes:
            return
        self.datatypes[name] = t
        if isinstance(t, TupleType):
            for e in t.elems:
                self.note_type(e)
        elif isinstance(t, AdtType):
            adt = self.prog.adts_by_name[t.name]
            for c in adt.constructors:
                for ft in ctor_field_types(self.prog, c, t.args):
                    self.note_type(ft)

    def datatype_block(self) -> str:
        if not self.datatypes:
            return ""
        names = sorted(self.datatypes)
        heads = " ".join(f"({n} 0)" for n in names)
        bodies = []
        for n in names:
            t = self.datatypes[n]
            if isinstance(t, TupleType):
                fields = " ".join(
                    f"({_tuple_field(n, i)} {sort_name(e)})"
                    for i, e in enumerate(t.elems)
                )
                bodies.append(f"((mk_{n} {fields}))")
            else:
                assert isinstance(t, AdtType)
                adt = self.prog.adts_by_name[t.name]
                ctors = []
                for c in adt.constructors:
                    fts = ctor_field_types(self.prog, c, t.args)
                    fields = " ".join(
                        f"({_field_name(c.name, n, f.name)} {sort_name(ft)})"
                        for f, ft in zip(c.fields, fts)
                    )
                    ctors.append(
                        f"({_ctor_name(c.name, n)}{' ' + fields if fields else ''})"
                    )
                bodies.append("(" + " ".join(ctors) + ")")
        return f"(declare-datatypes ({heads})\n  ({' '.join(bodies)}))"

    # ------------------------------------------------------- expressions

    def emit(self, e: Expr, env: dict[str, TypeRef]) -> str:
        if isinstance(e, Literal):
            if isinstance(e.value, bool):
                return "true" if e.value else "false"
            return str(e.value) if e.value >= 0 else f"(- {-e.value})"
        if isinstance(e, Variable):
            return e.name
        if isinstance(e, BinaryOp):
            a, b = self.emit(e.lhs, env), self.emit(e.rhs, env)
            op = {
                "&&": "and", "||": "or", "==": "=", "+": "+", "-": "-",
                "*": "*", "<": "<", "<=": "<=",
            }.get(e.op)
            if op is not None:
                return f"({op} {a} {b})"
            if e.op in ("div", "mod"):
                self.uses_div = True
                return f"({'tdiv' if e.op == 'div' else 'tmod'} {a} {b})"
            raise SmtError(f"operator {e.op}")
        if isinstance(e, UnaryOp):
            a = self.emit(e.operand, env)
            return f"(not {a})" if e.op == "!" else f"(- {a})"
        if isinstance(e, IfExpr):
            return (f"(ite {self.emit(e.cond, env)} {self.emit(e.then, env)}"
                    f" {self.emit(e.els, env)})")
        if isinstance(e, Let):
            t = type_of(e.value, env, self.prog)
            body = self.emit(e.body, {**env, e.name: t})
            return f"(let (({e.name} {self.emit(e.value, env)})) {body}"+")"
        if isinstance(e, FunctionCall):
            args = " ".join(self.emit(a, env) for a in e.args)
            return f"({e.name} {args})" if args else e.name
        if isinstance(e, ConstructorApp):
            adt_name = self.prog.ctor_to_adt[e.ctor]
            t = AdtType(adt_name, e.type_args or ())
            self.note_type(t)
            name = _ctor_name(e.ctor, sort_name(t))
            args = " ".join(self.emit(a, env) for a in e.args)
            return f"({name} {args})" if args else name
        if isinstance(e, TupleExpr):
            t = type_of(e, env, self.prog)
            self.note_type(t)
            args = " ".join(self.emit(x, env) for x in e.elems)
            return f"(mk_{sort_name(t)} {args})"
        if isinstance(e, TupleSelect):
            bt = type_of(e.base, env, self.prog)
            self.note_type(bt)
            return f"({_tuple_field(sort_name(bt), e.index)} {self.emit(e.base, env)})"
        if isinstance(e, FieldSelect):
            bt = type_of(e.base, env, self.prog)
            assert isinstance(bt, AdtType)
            self.note_type(bt)
            ctor = self._field_owner(bt, e.field)
            acc = _field_name(ctor, sort_name(bt), e.field)
            return f"({acc} {self.emit(e.base, env)})"
        if isinstance(e, IsConstructor):
            bt = type_of(e.expr, env, self.prog)
            self.note_type(bt)
            tester = _ctor_name(e.ctor, sort_name(bt))
            return f"((_ is {tester}) {self.emit(e.expr, env)})"
        if isinstance(e, MatchExpr):
            return self._emit_match(e, env)
        if isinstance(e, (Choose, Hole, Unsolved)):
            raise SmtError(f"cannot encode {type(e).__name__}")
        raise SmtError(f"cannot encode {type(e).__name__}")

    def _field_owner(self, t: AdtType, fld: str) -> str:
        adt = self.prog.adts_by_name[t.name]
        for c in adt.constructors:
            if any(f.name == fld for f in c.fields):
                return c.name
        raise SmtError(f"no field {fld} on {t.name}")

    def _emit_match(self, e: MatchExpr, env: dict[str, TypeRef]) -> str:
        st = type_of(e.scrutinee, env, self.prog)
        self.note_type(st)
        scrut = self.emit(e.scrutinee, env)
        arms = []
        for case in e.cases:
            conds, binds, env2 = self._pattern(case.pattern, scrut, st, env)
            body = self.emit(case.body, env2)
            for name, term in reversed(binds):
                body = f"(let (({name} {term})) {body})"
            arms.append((conds, body))
        # exhaustive by the type checker: last arm is the else branch
        out = arms[-1][1]
        for conds, body in reversed(arms[:-1]):
            cond = "true" if not conds else (
                conds[0] if len(conds) == 1 else f"(and {' '.join(conds)})"
            )
            out = f"(ite {cond} {body} {out})"
        return out

    def _pattern(self, p: Pattern, term: str, t: TypeRef, env: dict):
        """Conditions, let-bindings, and extended env for matching p."""
        conds: list[str] = []
        binds: list[tuple[str, str]] = []
        env2 = dict(env)

        def go(p: Pattern, term: str, t: TypeRef) -> None:
            if isinstance(p, WildcardPattern):
                return
            if isinstance(p, VarPattern):
                binds.append((p.name, term))
                env2[p.name] = t
                return
            if isinstance(p, TuplePattern):
                assert isinstance(t, TupleType)
                self.note_type(t)
                if p.binder is not None:
                    binds.append((p.binder, term))
                    env2[p.binder] = t
                sn = sort_name(t)
                for i, (sub, et) in enumerate(zip(p.elems, t.elems)):
                    go(sub, f"({_tuple_field(sn, i)} {term})", et)
                return
            assert isinstance(p, CtorPattern)
            assert isinstance(t, AdtType)
            self.note_type(t)
            sn = sort_name(t)
            conds.append(f"((_ is {_ctor_name(p.ctor, sn)}) {term})")
            if p.binder is not None:
                binds.append((p.binder, term))
                env2[p.binder] = t
            ctor = self.prog.constructor(p.ctor)
            fts = ctor_field_types(self.prog, ctor, t.args)
            for sub, f, ft in zip(p.args, ctor.fields, fts):
                go(sub, f"({_field_name(p.ctor, sn, f.name)} {term})", ft)

        go(p, term, t)
        return conds, binds, env2


_DIV_HELPERS = """\
(define-fun tdiv ((a Int) (b Int)) Int
  (let ((q (div (abs a) (abs b)))) (ite (= (>= a 0) (>= b 0)) q (- q))))
(define-fun tmod ((a Int) (b Int)) Int (- a (* b (tdiv a b))))"""


def emit_smtlib(problem, candidates, mode: str) -> str:
    """One checker query as an SMT-LIB2 script; `candidates` is a single
    expression in validate mode, a sequence in satisfy mode."""
    assert mode in ("validate", "satisfy")
    prog: Program = problem.program
    em = _Emitter(prog)

    env: dict[str, TypeRef] = {p.name: p.type for p in problem.inputs}
    for p in problem.inputs:
        em.note_type(p.type)

    # function definitions: concrete ones recursively, specs uninterpreted
    defined, uninterpreted = [], []
    for f in prog.functions:
        for p in f.params:
            em.note_type(p.type)
        em.note_type(f.return_type)
        if isinstance(f.body, Choose):
            uninterpreted.append(f)
        else:
            defined.append(f)

    def fun_env(f) -> dict[str, TypeRef]:
        return {p.name: p.type for p in f.params}

    bodies = [(f, em.emit(f.body, fun_env(f))) for f in defined]

    def formula(candidate: Expr) -> str:
        cand_env = dict(env)
        for b in problem.pi.bindings():
            cand_env[b.name] = b.type
        binds = []
        if len(problem.outputs) == 1:
            binds.append((problem.outputs[0].name, em.emit(candidate, cand_env)))
            cand_env[problem.outputs[0].name] = problem.outputs[0].type
        else:
            assert isinstance(candidate, TupleExpr)
            for o, el in zip(problem.outputs, candidate.elems):
                binds.append((o.name, em.emit(el, cand_env)))
                cand_env[o.name] = o.type
        spec = em.emit(problem.spec, cand_env)
        core = f"(not {spec})" if mode == "validate" else spec
        for name, term in reversed(binds):
            core = f"(let (({name} {term})) {core})"
        return core

    if mode == "validate":
        core = formula(candidates)
    else:
        parts = [formula(c) for c in candidates]
        core = parts[0] if len(parts) == 1 else f"(or {' '.join(parts)})"

    # path condition wraps the core, bindings as lets, facts as conjuncts
    pi_env = dict(env)
    wrapped = core
    rev = []
    for it in problem.pi.checker_items():
        if it[0] == "bind":
            _, name, rhs = it
            rev.append(("bind", name, em.emit(rhs, pi_env)))
            b = next(b for b in problem.pi.bindings() if b.name == name)
            pi_env[name] = b.type
        else:
            rev.append(("fact", em.emit(it[1], pi_env)))
    for it in reversed(rev):
        if it[0] == "bind":
            wrapped = f"(let (({it[1]} {it[2]})) {wrapped})"
        else:
            wrapped = f"(and {it[1]} {wrapped})"

    lines = ["; mode: " + mode, "(set-logic ALL)"]
    dt = em.datatype_block()
    if dt:
        lines.append(dt)
    if em.uses_div:
        lines.append(_DIV_HELPERS)
    for f in uninterpreted:
        sig = " ".join(sort_name(p.type) for p in f.params)
        lines.append(f"(declare-fun {f.name} ({sig}) {sort_name(f.return_type)})")
    if bodies:
        decls = []
        for f, _ in bodies:
            ps = " ".join(f"({p.name} {sort_name(p.type)})" for p in f.params)
            decls.append(f"({f.name} ({ps}) {sort_name(f.return_type)})")
        lines.append(
            "(define-funs-rec\n  (" + "\n   ".join(decls) + ")\n  ("
            + "\n   ".join(b for _, b in bodies) + "))"
        )
    for p in problem.inputs:
        lines.append(f"(declare-const {p.name} {sort_name(p.type)})")
    lines.append(f"(assert {wrapped})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


class SmtDumper:
    """Writes sequentially numbered query files for --dump-smt."""

    def __init__(self, directory: str):
        self.directory = directory
        self.counter = 0
        os.makedirs(directory, exist_ok=True)

    def dump(self, text: str) -> str:
        self.counter += 1
        path = os.path.join(self.directory, f"query_{self.counter:04d}.smt2")
        with open(path, "w") as fh:
            fh.write(text)
        return path


ACTIVE_DUMPER: Optional[SmtDumper] = None


def set_dumper(d: Optional[SmtDumper]) -> None:
    global ACTIVE_DUMPER
    ACTIVE_DUMPER = d


def maybe_dump(problem, candidates, mode: str) -> None:
    if ACTIVE_DUMPER is not None:
        try:
            ACTIVE_DUMPER.dump(emit_smtlib(problem, candidates, mode))
        except SmtError:
            pass  # queries over partial programs are not encodable
