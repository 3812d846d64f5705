"""Example store ordering and path-condition-filtered seeding."""
import pytest

from synthe.rules import make_initial_problem
from synthe.store import ExampleStore, generate_initial_examples

from conftest import build


def test_insertion_order_without_failures():
    s = ExampleStore([(1,), (2,), (3,)])
    assert s.inputs() == [(1,), (2,), (3,)]


def test_failures_promote_inputs():
    s = ExampleStore([(1,), (2,), (3,)])
    s.record_failure((3,))
    assert s.inputs() == [(3,), (1,), (2,)]
    s.record_failure((2,))
    s.record_failure((2,))
    assert s.inputs() == [(2,), (3,), (1,)]


def test_ties_break_by_insertion_order():
    s = ExampleStore([(1,), (2,), (3,)])
    s.record_failure((2,))
    s.record_failure((3,))
    # equal counts: (2,) was inserted before (3,)
    assert s.inputs() == [(2,), (3,), (1,)]


def test_duplicates_are_ignored():
    s = ExampleStore()
    assert s.add((7,)) is True
    assert s.add((7,)) is False
    assert len(s) == 1
    assert (7,) in s


def test_recording_failure_for_unknown_input_raises():
    s = ExampleStore([(1,)])
    with pytest.raises(KeyError):
        s.record_failure((9,))


def test_rows_expose_fail_counts():
    s = ExampleStore([(1,), (2,)])
    s.record_failure((1,))
    assert s.rows() == [((1,), 1), ((2,), 0)]


def test_seed_examples_respect_precondition():
    prog = build("""
def f(n: BigInt): BigInt = {
  require(0 < n)
  choose { (out: BigInt) => out == n }
}
""")
    problem = make_initial_problem(prog, "f")
    store = generate_initial_examples(problem, bound=3)
    assert store.inputs() == [(1,), (2,)]


def test_seed_examples_unconstrained_inputs():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def f(l: List): List = { choose { (out: List) => out == l } }
""")
    problem = make_initial_problem(prog, "f")
    store = generate_initial_examples(problem, bound=2)
    # size-1 and size-2 lists: Nil is the only one (Cons needs size >= 3)
    assert len(store) == 1


def test_seed_examples_skip_inputs_where_pi_errors():
    # the path-condition binding divides by n, so n == 0 is inadmissible
    prog = build("""
def f(n: BigInt): BigInt = {
  require(10 % n == 0)
  choose { (out: BigInt) => out * n == 10 }
}
""")
    problem = make_initial_problem(prog, "f")
    store = generate_initial_examples(problem, bound=3)
    assert (0,) not in store
    assert store.inputs() == [(1,), (-1,), (2,), (-2,)]
