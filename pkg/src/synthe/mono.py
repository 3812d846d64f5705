"""Monomorphization: specialize polymorphic functions at their call sites.

Specialized copies get a mangled name (`mem$BigInt`).  ADTs stay parametric;
only their instantiations at use sites matter downstream.  Polymorphic
originals are dropped from the result, so every remaining function body can
be evaluated directly.
"""
from __future__ import annotations

from .lang import (
    AdtType,
    BinaryOp,
    Choose,
    ConstructorApp,
    Ensuring,
    Expr,
    FieldSelect,
    FunctionCall,
    FunDef,
    Hole,
    IfExpr,
    IsConstructor,
    Let,
    Literal,
    MatchCase,
    MatchExpr,
    Param,
    Program,
    TupleExpr,
    TupleSelect,
    TupleType,
    TypeRef,
    TypeVar,
    UnaryOp,
    Unsolved,
    Variable,
    subst_type,
    type_vars_of,
)
from .typecheck import Checker, TypecheckError, _unify, type_of


def mangle_type(t: TypeRef) -> str:
    if isinstance(t, AdtType):
        if not t.args:
            return t.name
        return t.name + "_" + "_".join(mangle_type(a) for a in t.args)
    if isinstance(t, TupleType):
        return f"Tup{len(t.elems)}_" + "_".join(mangle_type(e) for e in t.elems)
    if isinstance(t, TypeVar):
        raise TypecheckError(f"type variable {t.name} survived monomorphization")
    from .printer import print_type

    return print_type(t)


def specialized_name(base: str, inst: tuple[TypeRef, ...]) -> str:
    return base + "$" + "_".join(mangle_type(t) for t in inst)


def _subst_expr_types(e: Expr, mapping: dict[str, TypeRef]) -> Expr:
    """Apply a type substitution to the type annotations inside an expression."""

    def go(e: Expr) -> Expr:
        if isinstance(e, (Literal, Variable, Unsolved)):
            return e
        if isinstance(e, Hole):
            if e.type is None:
                return e
            return Hole(subst_type(e.type, mapping), pos=e.pos)
        if isinstance(e, BinaryOp):
            return BinaryOp(e.op, go(e.lhs), go(e.rhs), pos=e.pos)
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, go(e.operand), pos=e.pos)
        if isinstance(e, IfExpr):
            return IfExpr(go(e.cond), go(e.then), go(e.els), pos=e.pos)
        if isinstance(e, Let):
            return Let(e.name, go(e.value), go(e.body), pos=e.pos)
        if isinstance(e, MatchExpr):
            cases = tuple(MatchCase(c.pattern, go(c.body)) for c in e.cases)
            return MatchExpr(go(e.scrutinee), cases, pos=e.pos)
        if isinstance(e, FunctionCall):
            return FunctionCall(e.name, tuple(go(a) for a in e.args), pos=e.pos)
        if isinstance(e, ConstructorApp):
            targs = e.type_args
            if targs is not None:
                targs = tuple(subst_type(t, mapping) for t in targs)
            return ConstructorApp(e.ctor, tuple(go(a) for a in e.args), targs, pos=e.pos)
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(go(x) for x in e.elems), pos=e.pos)
        if isinstance(e, TupleSelect):
            return TupleSelect(go(e.base), e.index, pos=e.pos)
        if isinstance(e, FieldSelect):
            return FieldSelect(go(e.base), e.field, pos=e.pos)
        if isinstance(e, IsConstructor):
            return IsConstructor(go(e.expr), e.ctor, pos=e.pos)
        raise TypeError(type(e).__name__)

    return go(e)


def monomorphize(prog: Program) -> Program:
    poly_funs: dict[str, FunDef] = {f.name: f for f in prog.functions if f.type_params}
    checker = Checker(prog)
    specialized: dict[str, FunDef] = {}
    order: list[str] = [f.name for f in prog.functions if not f.type_params]
    result: dict[str, FunDef] = {n: prog.functions_by_name[n] for n in order}
    work: list[str] = list(order)
    done: set[str] = set()

    def instantiate(base: FunDef, inst: tuple[TypeRef, ...]) -> str:
        name = specialized_name(base.name, inst)
        if name in specialized:
            return name
        mapping = dict(zip(base.type_params, inst))
        params = tuple(Param(p.name, subst_type(p.type, mapping)) for p in base.params)
        body = _subst_expr_types(base.body, mapping)
        pre = (
            _subst_expr_types(base.precondition, mapping)
            if base.precondition is not None
            else None
        )
        post = base.postcondition
        if post is not None:
            post = Ensuring(post.binder, _subst_expr_types(post.pred, mapping))
        f = FunDef(name, params, subst_type(base.return_type, mapping), body, pre, post)
        specialized[name] = f
        result[name] = f
        order.append(name)
        work.append(name)
        return name

    def rewrite(e: Expr, env: dict[str, TypeRef]) -> Expr:
        # NB: types are read off the pre-rewrite tree, which only mentions
        # functions present in the original program.
        if isinstance(e, FunctionCall):
            callee = poly_funs.get(e.name)
            if callee is None:
                return FunctionCall(e.name, tuple(rewrite(a, env) for a in e.args), pos=e.pos)
            subst: dict[str, TypeRef] = {}
            for a, p in zip(e.args, callee.params):
                _unify(p.type, type_of(a, env, prog), subst, set(callee.type_params), e.pos)
            inst = tuple(subst[tv] for tv in callee.type_params)
            if any(type_vars_of(t) for t in inst):
                raise TypecheckError(f"call to {e.name} not fully instantiated", e.pos)
            args = tuple(rewrite(a, env) for a in e.args)
            return FunctionCall(instantiate(callee, inst), args, pos=e.pos)
        if isinstance(e, Let):
            vt = type_of(e.value, env, prog)
            value = rewrite(e.value, env)
            return Let(e.name, value, rewrite(e.body, {**env, e.name: vt}), pos=e.pos)
        if isinstance(e, MatchExpr):
            st = type_of(e.scrutinee, env, prog)
            scrut = rewrite(e.scrutinee, env)
            cases = []
            for c in e.cases:
                bindings = checker.bind_pattern(c.pattern, st, e.pos)
                cases.append(MatchCase(c.pattern, rewrite(c.body, {**env, **bindings})))
            return MatchExpr(scrut, tuple(cases), pos=e.pos)
        if isinstance(e, Choose):
            cenv = {**env, **{v.name: v.type for v in e.vars}}
            return Choose(e.vars, rewrite(e.pred, cenv), pos=e.pos)
        if isinstance(e, (Literal, Variable, Hole, Unsolved)):
            return e
        if isinstance(e, BinaryOp):
            return BinaryOp(e.op, rewrite(e.lhs, env), rewrite(e.rhs, env), pos=e.pos)
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, rewrite(e.operand, env), pos=e.pos)
        if isinstance(e, IfExpr):
            return IfExpr(rewrite(e.cond, env), rewrite(e.then, env), rewrite(e.els, env), pos=e.pos)
        if isinstance(e, ConstructorApp):
            return ConstructorApp(e.ctor, tuple(rewrite(a, env) for a in e.args), e.type_args, pos=e.pos)
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(rewrite(x, env) for x in e.elems), pos=e.pos)
        if isinstance(e, TupleSelect):
            return TupleSelect(rewrite(e.base, env), e.index, pos=e.pos)
        if isinstance(e, FieldSelect):
            return FieldSelect(rewrite(e.base, env), e.field, pos=e.pos)
        if isinstance(e, IsConstructor):
            return IsConstructor(rewrite(e.expr, env), e.ctor, pos=e.pos)
        raise TypeError(type(e).__name__)

    while work:
        name = work.pop(0)
        if name in done:
            continue
        done.add(name)
        f = result[name]
        env = {p.name: p.type for p in f.params}
        body = rewrite(f.body, env)
        pre = rewrite(f.precondition, env) if f.precondition is not None else None
        post = f.postcondition
        if post is not None:
            penv = {**env, post.binder: f.return_type}
            post = Ensuring(post.binder, rewrite(post.pred, penv))
        result[name] = FunDef(f.name, f.params, f.return_type, body, pre, post)

    funs = tuple(result[n] for n in order)
    for f in funs:
        if any(type_vars_of(p.type) for p in f.params) or type_vars_of(f.return_type):
            raise TypecheckError(f"{f.name} still polymorphic after monomorphization")
    return Program(prog.adts, funs)
