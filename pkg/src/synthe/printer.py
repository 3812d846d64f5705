"""Pretty-printer. parse(print_program(parse(s))) equals parse(s)."""
from __future__ import annotations

from .lang import (
    AdtDef,
    AdtType,
    BIGINT,
    BinaryOp,
    BoolType,
    Choose,
    ConstructorApp,
    CtorPattern,
    Expr,
    FieldSelect,
    FunctionCall,
    FunDef,
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
    TypeVar,
    UnaryOp,
    Unsolved,
    Variable,
    VarPattern,
    WildcardPattern,
)

_OR, _AND, _CMP, _ADD, _MUL, _UNARY, _POSTFIX, _ATOM = range(1, 9)

_OP_LEVEL = {
    "||": _OR, "&&": _AND,
    "==": _CMP, "<": _CMP, "<=": _CMP,
    "+": _ADD, "-": _ADD,
    "*": _MUL, "div": _MUL, "mod": _MUL,
}
_OP_TEXT = {"div": "/", "mod": "%"}


def print_type(t: TypeRef) -> str:
    if isinstance(t, BoolType):
        return "Bool"
    if isinstance(t, IntType):
        return "Int"
    if isinstance(t, TypeVar):
        return t.name
    if isinstance(t, TupleType):
        return "(" + ", ".join(print_type(e) for e in t.elems) + ")"
    if isinstance(t, AdtType):
        if t.args:
            return t.name + "[" + ", ".join(print_type(a) for a in t.args) + "]"
        return t.name
    return "BigInt"


def print_pattern(p: Pattern) -> str:
    if isinstance(p, WildcardPattern):
        return "_"
    if isinstance(p, VarPattern):
        return p.name
    if isinstance(p, TuplePattern):
        s = "(" + ", ".join(print_pattern(e) for e in p.elems) + ")"
        return f"{p.binder} @ {s}" if p.binder else s
    assert isinstance(p, CtorPattern)
    s = p.ctor + "(" + ", ".join(print_pattern(a) for a in p.args) + ")"
    return f"{p.binder} @ {s}" if p.binder else s


def print_expr(e: Expr, indent: int = 0, prog: Program | None = None) -> str:
    return _expr(e, 0, indent, prog)


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s


def _expr(e: Expr, level: int, ind: int, prog: Program | None = None) -> str:
    pad = "  " * ind
    if isinstance(e, Literal):
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        if e.type == BIGINT:
            return f"BigInt({e.value})"
        return str(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, (Hole, Unsolved)):
        return "???"
    if isinstance(e, BinaryOp):
        lv = _OP_LEVEL[e.op]
        text = _OP_TEXT.get(e.op, e.op)
        left_lv = lv if e.op not in ("==", "<", "<=") else lv + 1
        s = f"{_expr(e.lhs, left_lv, ind, prog)} {text} {_expr(e.rhs, lv + 1, ind, prog)}"
        return _paren(s, level > lv)
    if isinstance(e, UnaryOp):
        text = "!" if e.op == "!" else "-"
        return _paren(text + _expr(e.operand, _UNARY, ind, prog), level > _UNARY)
    if isinstance(e, IfExpr):
        s = (
            f"if ({_expr(e.cond, 0, ind, prog)}) {_expr(e.then, _OR, ind, prog)}"
            f" else {_expr(e.els, _OR, ind, prog)}"
        )
        return _paren(s, level > 0)
    if isinstance(e, Let):
        inner = "  " * (ind + 1)
        lines = [f"{{"]
        cur: Expr = e
        while isinstance(cur, Let):
            lines.append(f"{inner}val {cur.name} = {_expr(cur.value, 0, ind + 1, prog)}")
            cur = cur.body
        lines.append(f"{inner}{_expr(cur, 0, ind + 1, prog)}")
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    if isinstance(e, MatchExpr):
        inner = "  " * (ind + 1)
        head = _expr(e.scrutinee, _POSTFIX, ind, prog)
        lines = [f"{head} match {{"]
        for c in e.cases:
            body = _expr(c.body, 0, ind + 1, prog)
            lines.append(f"{inner}case {print_pattern(c.pattern)} => {body}")
        lines.append(f"{pad}}}")
        return _paren("\n".join(lines), level > 0)
    if isinstance(e, FunctionCall):
        return e.name + "(" + ", ".join(_expr(a, 0, ind, prog) for a in e.args) + ")"
    if isinstance(e, ConstructorApp):
        return e.ctor + "(" + ", ".join(_expr(a, 0, ind, prog) for a in e.args) + ")"
    if isinstance(e, TupleExpr):
        return "(" + ", ".join(_expr(x, 0, ind, prog) for x in e.elems) + ")"
    if isinstance(e, TupleSelect):
        return _expr(e.base, _POSTFIX, ind, prog) + f"._{e.index + 1}"
    if isinstance(e, FieldSelect):
        return _expr(e.base, _POSTFIX, ind, prog) + "." + e.field
    if isinstance(e, Choose):
        binders = ", ".join(f"{v.name}: {print_type(v.type)}" for v in e.vars)
        return f"choose {{ ({binders}) => {_expr(e.pred, 0, ind, prog)} }}"
    if isinstance(e, IsConstructor):
        scrut = _expr(e.expr, _POSTFIX, ind, prog)
        if prog is None:
            # debug form for traces; re-parseable output always passes prog
            return _paren(f"{scrut} is {e.ctor}", level > 0)
        # no surface syntax for constructor tests; emit the equivalent match
        ctor = prog.constructor(e.ctor)
        wilds = ", ".join("_" for _ in ctor.fields)
        s = f"{scrut} match {{ case {e.ctor}({wilds}) => true case _ => false }}"
        return _paren(s, level > 0)
    raise TypeError(f"cannot print {type(e).__name__}")


def print_adt(a: AdtDef) -> str:
    params = f"[{', '.join(a.type_params)}]" if a.type_params else ""
    ctors = " | ".join(
        c.name + "(" + ", ".join(f"{f.name}: {print_type(f.type)}" for f in c.fields) + ")"
        for c in a.constructors
    )
    return f"adt {a.name}{params} = {ctors}"


def print_fun(f: FunDef) -> str:
    tparams = f"[{', '.join(f.type_params)}]" if f.type_params else ""
    params = ", ".join(f"{p.name}: {print_type(p.type)}" for p in f.params)
    lines = [f"def {f.name}{tparams}({params}): {print_type(f.return_type)} = {{"]
    if f.precondition is not None:
        lines.append(f"  require({_expr(f.precondition, 0, 1)})")
    body = f.body
    while isinstance(body, Let):
        lines.append(f"  val {body.name} = {_expr(body.value, 0, 1)}")
        body = body.body
    lines.append("  " + _expr(body, 0, 1))
    tail = "}"
    if f.postcondition is not None:
        tail += (
            f" ensuring {{ {f.postcondition.binder} =>"
            f" {_expr(f.postcondition.pred, 0, 0)} }}"
        )
    lines.append(tail)
    return "\n".join(lines)


def print_program(p: Program) -> str:
    parts = [print_adt(a) for a in p.adts] + [print_fun(f) for f in p.functions]
    return "\n\n".join(parts) + "\n"
