"""Runtime values, the value-size metric, and bounded exhaustive enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .lang import (
    AdtType,
    BoolType,
    IntType,
    Param,
    Program,
    TupleType,
    TypeRef,
)
from .typecheck import INT_MAX, INT_MIN, ctor_field_types


@dataclass(frozen=True)
class I32:
    """A 32-bit Int value.  BigInt values are plain Python ints."""

    v: int


@dataclass(frozen=True)
class VCtor:
    ctor: str
    args: tuple["Value", ...]


Value = Union[bool, int, I32, VCtor, tuple]


def value_size(v: Value) -> int:
    if isinstance(v, bool):
        return 1
    if isinstance(v, I32):
        return abs(v.v) + 1
    if isinstance(v, int):
        return abs(v) + 1
    if isinstance(v, VCtor):
        return 1 + sum(value_size(a) for a in v.args)
    if isinstance(v, tuple):
        return sum(value_size(e) for e in v)
    raise TypeError(type(v).__name__)


def show_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, I32):
        return str(v.v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, VCtor):
        return v.ctor + "(" + ", ".join(show_value(a) for a in v.args) + ")"
    if isinstance(v, tuple):
        return "(" + ", ".join(show_value(e) for e in v) + ")"
    raise TypeError(type(v).__name__)


class ValueEnumerator:
    """Deterministic size-bounded value enumeration for a fixed program.

    Values of a type come out size-ascending; within one size, integers list
    the nonnegative value first and ADTs follow constructor declaration
    order.  The sequence for a larger bound extends the smaller one only
    per size stratum, but membership is always monotone in the bound.
    """

    def __init__(self, prog: Program):
        self.prog = prog
        self._min_cache: dict[TypeRef, int] = {}
        self._cache: dict[tuple[TypeRef, int], tuple[Value, ...]] = {}

    # ------------------------------------------------------------- minimum

    def min_size(self, t: TypeRef) -> int:
        """Smallest size of any value of t; a large sentinel if uninhabited.

        Cycles in the type graph are cut off during the computation; that is
        exact because a minimal value never contains a nested value of a type
        currently being expanded (the nested one would be smaller).  Results
        are only cached for the outermost query so a cut-off never leaks into
        the cache.
        """
        cached = self._min_cache.get(t)
        if cached is not None:
            return cached
        result = self._min(t, frozenset())
        self._min_cache[t] = result
        return result

    def _min(self, t: TypeRef, visiting: frozenset) -> int:
        cached = self._min_cache.get(t)
        if cached is not None:
            return cached
        if isinstance(t, TupleType):
            return min(sum(self._min(e, visiting) for e in t.elems), _INFINITY)
        if isinstance(t, AdtType):
            if t in visiting:
                return _INFINITY
            inner = visiting | {t}
            adt = self.prog.adts_by_name[t.name]
            best = _INFINITY
            for c in adt.constructors:
                fts = ctor_field_types(self.prog, c, t.args)
                best = min(best, 1 + sum(self._min(ft, inner) for ft in fts))
            return min(best, _INFINITY)
        return 1  # Bool, Int, BigInt

    # --------------------------------------------------------- enumeration

    def of_size(self, t: TypeRef, s: int) -> tuple[Value, ...]:
        if s <= 0:
            return ()
        key = (t, s)
        got = self._cache.get(key)
        if got is not None:
            return got
        out: list[Value] = []
        if isinstance(t, BoolType):
            if s == 1:
                out = [False, True]
        elif isinstance(t, IntType):
            if s == 1:
                out = [I32(0)]
            else:
                n = s - 1
                if n <= INT_MAX:
                    out.append(I32(n))
                if INT_MIN <= -n:
                    out.append(I32(-n))
        elif isinstance(t, TupleType):
            out = [
                tuple(vs)
                for vs in self._products(t.elems, s)
            ]
        elif isinstance(t, AdtType):
            adt = self.prog.adts_by_name[t.name]
            for c in adt.constructors:
                fts = ctor_field_types(self.prog, c, t.args)
                for vs in self._products(fts, s - 1):
                    out.append(VCtor(c.name, tuple(vs)))
                if not fts and s == 1:
                    out.append(VCtor(c.name, ()))
        else:  # BigIntType
            if s == 1:
                out = [0]
            else:
                out = [s - 1, -(s - 1)]
        result = tuple(out)
        self._cache[key] = result
        return result

    def _products(self, types: Iterable[TypeRef], total: int) -> Iterable[list[Value]]:
        """All component lists whose sizes sum to `total`, deterministically."""
        types = list(types)
        if not types:
            return
        if len(types) == 1:
            for v in self.of_size(types[0], total):
                yield [v]
            return
        head, rest = types[0], types[1:]
        lo = self.min_size(head)
        rest_min = sum(self.min_size(t) for t in rest)
        for s in range(lo, total - rest_min + 1):
            for v in self.of_size(head, s):
                for vs in self._products(rest, total - s):
                    yield [v] + vs

    def up_to(self, t: TypeRef, bound: int) -> tuple[Value, ...]:
        out: list[Value] = []
        for s in range(1, bound + 1):
            out.extend(self.of_size(t, s))
        return tuple(out)

    def input_vectors(self, params: tuple[Param, ...], bound: int) -> Iterable[tuple[Value, ...]]:
        """Cartesian product of per-parameter enumerations, last arg fastest."""
        if not params:
            yield ()
            return
        columns = [self.up_to(p.type, bound) for p in params]
        yield from itertools.product(*columns)


_INFINITY = 10 ** 9


def generate_initial_examples(prog: Program, params: tuple[Param, ...], bound: int) -> list[tuple[Value, ...]]:
    """Seed inputs for the example store: every vector whose arguments all
    have size at most `bound`."""
    return list(ValueEnumerator(prog).input_vectors(params, bound))
