"""Value-size metric and bounded exhaustive value enumeration."""
import pytest

from synthe.lang import AdtType, BIGINT, BOOL, INT, Param, TupleType
from synthe.values import I32, VCtor, ValueEnumerator, show_value, value_size

from conftest import build

LIST = AdtType("List", ())


def nil():
    return VCtor("Nil", ())


def cons(h, t):
    return VCtor("Cons", (h, t))


def from_py(xs):
    out = nil()
    for x in reversed(xs):
        out = cons(x, out)
    return out


@pytest.fixture
def enum(list_lib):
    return ValueEnumerator(list_lib)


def test_value_size_metric():
    assert value_size(0) == 1
    assert value_size(5) == 6
    assert value_size(-5) == 6
    assert value_size(I32(-3)) == 4
    assert value_size(True) == 1
    assert value_size(nil()) == 1
    # Cons(0, Nil) = 1 + (0+1) + 1
    assert value_size(from_py([0])) == 3
    assert value_size(from_py([0, 1, 0])) == 8
    assert value_size((2, nil())) == 4


def test_show_value():
    assert show_value(from_py([1, 0])) == "Cons(1, Cons(0, Nil()))"
    assert show_value((True, I32(-2))) == "(true, -2)"


def test_min_size(enum):
    assert enum.min_size(BIGINT) == 1
    assert enum.min_size(LIST) == 1  # Nil
    assert enum.min_size(TupleType((BIGINT, LIST))) == 2


def test_bigint_enumeration_order(enum):
    assert enum.up_to(BIGINT, 3) == (0, 1, -1, 2, -2)
    assert enum.of_size(BIGINT, 1) == (0,)
    assert enum.of_size(BIGINT, 4) == (3, -3)


def test_bool_and_int_enumeration(enum):
    assert enum.up_to(BOOL, 5) == (False, True)
    assert enum.of_size(INT, 3) == (I32(2), I32(-2))


def test_lists_of_each_size_match_a_direct_count(enum):
    # independent oracle: a list [x1..xk] has size (k+1) + sum(|xi|+1), so
    # the number of lists of size s equals the number of integer tuples
    # (with sign choices) fitting the remaining weight
    def count_lists(s):
        def go(remaining, first):
            # number of ways to build a list whose encoded size is `remaining`
            if remaining < 1:
                return 0
            total = 1 if remaining == 1 else 0  # Nil
            # Cons(head of size h, tail of size t): 1 + h + t == remaining
            for h in range(1, remaining - 1):
                signs = 1 if h == 1 else 2
                total += signs * go(remaining - 1 - h, False)
            return total

        return go(s, True)

    for s in range(1, 10):
        got = enum.of_size(LIST, s)
        assert len(got) == count_lists(s)
        assert len(set(got)) == len(got)
        for v in got:
            assert value_size(v) == s


def test_every_small_list_appears_exactly_once(enum):
    bound = 8
    got = enum.up_to(LIST, bound)
    # brute-force oracle over python lists
    expected = set()

    def grow(prefix):
        v = from_py(prefix)
        if value_size(v) > bound:
            return
        expected.add(v)
        for x in range(0, bound):
            for sx in ({x, -x} if x else {0}):
                if value_size(from_py(prefix + [sx])) <= bound:
                    grow(prefix + [sx])

    grow([])
    assert set(got) == expected
    assert len(got) == len(expected)


def test_enumeration_is_deterministic(list_lib):
    a = ValueEnumerator(list_lib).up_to(LIST, 7)
    b = ValueEnumerator(list_lib).up_to(LIST, 7)
    assert a == b


def test_tuple_sizes_are_sums(enum):
    t = TupleType((BIGINT, BIGINT))
    for v in enum.of_size(t, 4):
        assert value_size(v) == 4
    # (0,0) is the unique size-2 pair
    assert enum.of_size(t, 2) == ((0, 0),)


def test_input_vectors_cover_product(enum):
    params = (Param("a", BIGINT), Param("l", LIST))
    vecs = list(enum.input_vectors(params, 3))
    ints = enum.up_to(BIGINT, 3)
    lists = enum.up_to(LIST, 3)
    assert len(vecs) == len(ints) * len(lists)
    assert vecs[0] == (ints[0], lists[0])
    # last argument varies fastest
    assert vecs[1] == (ints[0], lists[1])


def test_uninhabited_recursive_type_has_huge_min():
    prog = build("""
adt Stream = Next(head: BigInt, tail: Stream)
def f(s: Stream): BigInt = { 0 }
""")
    e = ValueEnumerator(prog)
    assert e.min_size(AdtType("Stream", ())) > 10**6
    assert e.up_to(AdtType("Stream", ()), 8) == ()
