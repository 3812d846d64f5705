"""Priority-ordered example store used by symbolic term exploration.

Inputs that fail many candidates are tried first; ties keep insertion
order.  Initial examples come from bounded exhaustive enumeration of the
input space, filtered by the problem's path condition.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .checker import PASS, check_one
from .interp import Interp
from .lang import Program, TRUE
from .values import Value, ValueEnumerator

# Seed inputs stay tiny; larger inputs surface later as counterexamples.
DEFAULT_EXAMPLE_BOUND = 2


class ExampleStore:
    """Ordered (input, failCount) rows, no duplicate inputs."""

    def __init__(self, inputs: Iterable[tuple[Value, ...]] = ()):
        self._rows: list[list] = []  # [input, failCount, insertionIndex]
        self._index: dict[tuple[Value, ...], list] = {}
        for vec in inputs:
            self.add(vec)

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, vec: tuple[Value, ...]) -> bool:
        return vec in self._index

    def __iter__(self) -> Iterator[tuple[Value, ...]]:
        return iter(self.inputs())

    def inputs(self) -> list[tuple[Value, ...]]:
        """Inputs in priority order (highest failCount first)."""
        return [row[0] for row in self._rows]

    def rows(self) -> list[tuple[tuple[Value, ...], int]]:
        return [(row[0], row[1]) for row in self._rows]

    def add(self, vec: tuple[Value, ...]) -> bool:
        """Insert with failCount 0; no-op on duplicates. True if inserted."""
        if vec in self._index:
            return False
        row = [vec, 0, len(self._index)]
        self._index[vec] = row
        self._rows.append(row)
        self._resort()
        return True

    def record_failure(self, vec: tuple[Value, ...]) -> None:
        row = self._index.get(vec)
        if row is None:
            raise KeyError(f"input not in store: {vec!r}")
        row[1] += 1
        self._resort()

    def _resort(self) -> None:
        self._rows.sort(key=lambda row: (-row[1], row[2]))


def generate_initial_examples(problem, prog: Optional[Program] = None,
                              bound: int = DEFAULT_EXAMPLE_BOUND) -> ExampleStore:
    """Every input tuple of componentwise value-size <= bound that satisfies
    the problem's path condition, smallest first."""
    prog = prog if prog is not None else problem.program
    interp = Interp(prog)
    pi_items = problem.pi.checker_items()
    names = [p.name for p in problem.inputs]
    store = ExampleStore()
    enum = ValueEnumerator(prog)
    for vec in enum.input_vectors(tuple(problem.inputs), bound):
        env = dict(zip(names, vec))
        if check_one(interp, pi_items, (), TRUE, env) == PASS:
            store.add(vec)
    return store
