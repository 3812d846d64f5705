import pytest

from synthe.lang import AdtType, BigIntType, BoolType, Choose
from synthe.parser import ParseError, parse_program
from synthe.typecheck import TypecheckError, resolve_program

from conftest import build


def check(src: str):
    return resolve_program(parse_program(src))


def test_accepts_recursive_adt_program():
    prog = check("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
""")
    assert prog.functions_by_name["size"].return_type == BigIntType()


def test_condition_must_be_bool():
    with pytest.raises(TypecheckError):
        check("def f(x: BigInt): BigInt = { if (x) 1 else 2 }")


def test_arity_mismatch():
    with pytest.raises(TypecheckError):
        check("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): List = { Cons(l) }
""")


def test_branch_types_must_agree():
    with pytest.raises(TypecheckError):
        check("def f(p: Bool): BigInt = { if (p) 1 else false }")


def test_unknown_variable():
    # name resolution runs before type checking proper
    with pytest.raises(ParseError):
        check("def f(x: BigInt): BigInt = { y }")


def test_nonexhaustive_match_rejected():
    with pytest.raises(TypecheckError):
        check("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): BigInt = { l match { case Cons(h, t) => h } }
""")


def test_wildcard_makes_match_exhaustive():
    check("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): BigInt = { l match { case Cons(h, t) => h; case _ => 0 } }
""")


def test_mixed_int_widths_rejected():
    with pytest.raises(TypecheckError):
        check("def f(a: Int, b: BigInt): BigInt = { a + b }")


def test_precondition_must_be_bool():
    with pytest.raises(TypecheckError):
        check("""
def f(x: BigInt): BigInt = {
  require(x + 1)
  x
}
""")


def test_choose_binder_scope():
    prog = check("""
def pick(a: BigInt): BigInt = {
  choose { (out: BigInt) => out == a }
}
""")
    assert isinstance(prog.functions_by_name["pick"].body, Choose)
    with pytest.raises(ParseError):
        check("""
def pick(a: BigInt): BigInt = {
  choose { (out: BigInt) => out == missing }
}
""")


def test_field_select_typechecks():
    check("""
adt Pair = Pair(a: BigInt, b: BigInt)
def fst(p: Pair): BigInt = { p.a }
""")
    # selectors work on any constructor that declares the field; applying
    # one to the wrong alternative is a runtime error, not a type error
    check("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): BigInt = { l.head }
""")
    with pytest.raises(TypecheckError):
        check("""
adt Pair = Pair(a: BigInt, b: BigInt)
def fst(p: Pair): BigInt = { p.nosuch }
""")


def test_monomorphize_polymorphic_list():
    prog = build("""
adt List[T] = Nil() | Cons(head: T, tail: List[T])

def size[T](l: List[T]): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }

def f(l: List[BigInt], m: List[Bool]): BigInt = { size(l) + size(m) }
""")
    fn_names = {f.name for f in prog.functions}
    assert fn_names == {"f", "size$BigInt", "size$Bool"}
    # the ADT declaration itself stays parametric; only functions specialize
    assert {a.name for a in prog.adts} == {"List"}
    for f in prog.functions:
        assert not f.type_params


def test_monomorphic_program_unchanged_by_mono(list_lib):
    assert {a.name for a in list_lib.adts} == {"List"}
    f = list_lib.functions_by_name["size"]
    assert f.params[0].type == AdtType("List", ())


def test_bool_operations_type(list_lib):
    src = """
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(a: Bool, b: Bool): Bool = { a && !b || a == b }
"""
    prog = check(src)
    assert prog.functions_by_name["f"].return_type == BoolType()
