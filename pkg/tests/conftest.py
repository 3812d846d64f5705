import dataclasses
import os

import pytest

from synthe.lang import ConstructorApp, Expr, FunctionCall
from synthe.mono import monomorphize
from synthe.parser import parse_expr, parse_program
from synthe.typecheck import resolve_program

BENCH_DIR = os.path.join(os.path.dirname(__file__), "..", "benchmarks")


def build(src: str):
    """Parse, resolve and monomorphize a program source."""
    return monomorphize(resolve_program(parse_program(src)))


def cexpr(prog, src: str) -> Expr:
    """parse_expr plus constructor resolution against `prog`.  Bare
    parse_expr leaves `Cons(x, y)` as a function call; the interpreter
    only accepts proper constructor applications."""
    ctors = {c.name for a in prog.adts for c in a.constructors}

    def fix(e: Expr) -> Expr:
        changes = {}
        for f in dataclasses.fields(e):
            v = getattr(e, f.name)
            if isinstance(v, Expr):
                new = fix(v)
                if new is not v:
                    changes[f.name] = new
            elif isinstance(v, tuple) and v and not isinstance(v[0], str):
                new_items = []
                changed = False
                for item in v:
                    if isinstance(item, Expr):
                        ni = fix(item)
                        changed = changed or ni is not item
                        new_items.append(ni)
                    elif hasattr(item, "body"):
                        nb = fix(item.body)
                        changed = changed or nb is not item.body
                        new_items.append(dataclasses.replace(item, body=nb))
                    else:
                        new_items.append(item)
                if changed:
                    changes[f.name] = tuple(new_items)
        if changes:
            e = dataclasses.replace(e, **changes)
        if isinstance(e, FunctionCall) and e.name in ctors:
            return ConstructorApp(e.name, e.args)
        return e

    return fix(parse_expr(src))


def load_benchmark(name: str):
    with open(os.path.join(BENCH_DIR, name + ".lng")) as fh:
        return build(fh.read())


@pytest.fixture
def list_lib():
    return build("""
adt List = Nil() | Cons(head: BigInt, tail: List)

def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }

def mem(v: BigInt, l: List): Bool = { l match {
  case Nil() => false
  case Cons(h, t) => h == v || mem(v, t)
} }
""")
