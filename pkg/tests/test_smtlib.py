"""SMT-LIB2 script emission, frozen as golden text.

No solver runs here; the scripts were checked by hand against the SMT-LIB
standard (datatypes, define-funs-rec, ite-encoded matches) and are pinned
so later refactors cannot silently change the encoding.
"""
import os
import textwrap

import pytest

from synthe.lang import Hole
from synthe.rules import make_initial_problem
from synthe.smtlib import SmtDumper, SmtError, emit_smtlib, maybe_dump, set_dumper

from conftest import build, cexpr

LIST_SRC = """
adt List = Nil() | Cons(head: BigInt, tail: List)
def size(l: List): BigInt = { l match {
  case Nil() => 0
  case Cons(h, t) => 1 + size(t)
} }
def ins(l: List, v: BigInt): List = {
  choose { (out: List) => size(out) == size(l) + 1 }
}
"""


def list_problem():
    prog = build(LIST_SRC)
    return prog, make_initial_problem(prog, "ins")


GOLDEN_VALIDATE = textwrap.dedent("""\
    ; mode: validate
    (set-logic ALL)
    (declare-datatypes ((List 0))
      (((Nil_List) (Cons_List (Cons_List_head Int) (Cons_List_tail List)))))
    (declare-fun ins (List Int) List)
    (define-funs-rec
      ((size ((l List)) Int))
      ((ite ((_ is Nil_List) l) 0 (let ((h (Cons_List_head l))) (let ((t (Cons_List_tail l))) (+ 1 (size t)))))))
    (declare-const l List)
    (declare-const v Int)
    (assert (let ((out (Cons_List v l))) (not (= (size out) (+ (size l) 1)))))
    (check-sat)
    (get-model)
    """)


def test_validate_script_for_list_insert():
    prog, problem = list_problem()
    got = emit_smtlib(problem, cexpr(prog, "Cons(v, l)"), "validate")
    assert got == GOLDEN_VALIDATE


def test_satisfy_script_is_a_disjunction_over_candidates():
    prog, problem = list_problem()
    got = emit_smtlib(problem, [cexpr(prog, "l"), cexpr(prog, "Cons(v, l)")], "satisfy")
    assert got.startswith("; mode: satisfy\n")
    assert (
        "(assert (or (let ((out l)) (= (size out) (+ (size l) 1))) "
        "(let ((out (Cons_List v l))) (= (size out) (+ (size l) 1)))))" in got
    )
    # no negation in satisfy mode
    assert "(not " not in got


GOLDEN_DIVMOD = textwrap.dedent("""\
    ; mode: validate
    (set-logic ALL)
    (declare-datatypes ((Tup2_BigInt_BigInt 0))
      (((mk_Tup2_BigInt_BigInt (Tup2_BigInt_BigInt_1 Int) (Tup2_BigInt_BigInt_2 Int)))))
    (define-fun tdiv ((a Int) (b Int)) Int
      (let ((q (div (abs a) (abs b)))) (ite (= (>= a 0) (>= b 0)) q (- q))))
    (define-fun tmod ((a Int) (b Int)) Int (- a (* b (tdiv a b))))
    (declare-fun divmod (Int Int) Tup2_BigInt_BigInt)
    (declare-const a Int)
    (declare-const b Int)
    (assert (and (< 0 b) (let ((q (tdiv a b))) (let ((r (tmod a b))) (not (and (and (= a (+ (* q b) r)) (<= 0 r)) (< r b)))))))
    (check-sat)
    (get-model)
    """)


def test_tuple_outputs_and_truncated_division():
    prog = build("""
def divmod(a: BigInt, b: BigInt): (BigInt, BigInt) = {
  require(0 < b)
  choose { (q: BigInt, r: BigInt) => a == q * b + r && 0 <= r && r < b }
}
""")
    problem = make_initial_problem(prog, "divmod")
    got = emit_smtlib(problem, cexpr(prog, "(a / b, a % b)"), "validate")
    assert got == GOLDEN_DIVMOD


def test_path_condition_bindings_become_lets():
    from synthe.rules import case_split_adt

    prog, problem = list_problem()
    cons = case_split_adt(problem, "l").subproblems[1]
    got = emit_smtlib(cons, cexpr(prog, "Cons(v, t0)"), "validate")
    assert "((_ is Cons_List) l)" in got
    assert "(let ((h0 (Cons_List_head l)))" in got
    assert "(let ((t0 (Cons_List_tail l)))" in got


def test_unencodable_candidates_raise():
    prog, problem = list_problem()
    with pytest.raises(SmtError):
        emit_smtlib(problem, Hole(None), "validate")


def test_dumper_numbers_queries(tmp_path):
    prog, problem = list_problem()
    d = SmtDumper(str(tmp_path))
    set_dumper(d)
    try:
        maybe_dump(problem, cexpr(prog, "Cons(v, l)"), "validate")
        maybe_dump(problem, [cexpr(prog, "l")], "satisfy")
        # unencodable queries are skipped, not fatal
        maybe_dump(problem, Hole(None), "validate")
    finally:
        set_dumper(None)
    files = sorted(os.listdir(tmp_path))
    assert files == ["query_0001.smt2", "query_0002.smt2"]
    assert open(tmp_path / "query_0001.smt2").read() == GOLDEN_VALIDATE


def test_dumping_disabled_by_default(tmp_path):
    prog, problem = list_problem()
    maybe_dump(problem, cexpr(prog, "l"), "validate")
    assert os.listdir(tmp_path) == []
