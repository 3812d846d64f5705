"""Symbolic term exploration: the closing synthesis rule.

Candidates are generated size stratum by size stratum from the problem
grammar.  Each stratum is first thinned by running every candidate on a
priority-ordered store of concrete inputs; survivors are then validated by
bounded exhaustive checking.  A validation counterexample both removes the
candidate and joins the store, immediately re-testing the rest of the set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .budget import Budget, NoBudget
from .checker import (
    CheckConfig,
    Counterexample,
    FAIL,
    Valid,
    candidate_binds,
    candidate_program,
    check_candidate,
    check_one,
    find_satisfying_pair,
)
from .grammar import Grammar, unfold
from .interp import Interp
from .lang import Expr, Hole
from .store import DEFAULT_EXAMPLE_BOUND, ExampleStore, generate_initial_examples
from .values import Value, ValueEnumerator


@dataclass(frozen=True)
class SteConfig:
    max_size: int = 7
    small_set_threshold: int = 16
    check: CheckConfig = field(default_factory=CheckConfig)
    example_bound: int = DEFAULT_EXAMPLE_BOUND


@dataclass
class StratumStats:
    size: int
    generated: int = 0
    pruned_by_tests: int = 0
    pruned_by_counterexamples: int = 0
    validated: int = 0


@dataclass
class SteTrace:
    strata: list[StratumStats] = field(default_factory=list)
    solved_size: Optional[int] = None
    pruned_candidates: list[Expr] = field(default_factory=list)

    def summary_lines(self) -> list[str]:
        out = []
        for s in self.strata:
            out.append(
                f"{s.size}\t{s.generated}\t{s.pruned_by_tests}"
                f"\t{s.pruned_by_counterexamples}\t{s.validated}"
            )
        return out


class CandidateSet:
    """Insertion-ordered candidate set with per-candidate test rigs."""

    def __init__(self, problem, candidates: Sequence[Expr], partial: Expr, fuel: int):
        self._rigs: dict[Expr, tuple[Interp, tuple]] = {}
        for c in candidates:
            interp = Interp(candidate_program(problem, c, partial), fuel)
            self._rigs[c] = (interp, candidate_binds(problem, c))

    def __len__(self) -> int:
        return len(self._rigs)

    def __contains__(self, c: Expr) -> bool:
        return c in self._rigs

    def __iter__(self) -> Iterator[Expr]:
        return iter(list(self._rigs))

    def rig(self, c: Expr) -> tuple[Interp, tuple]:
        return self._rigs[c]

    def remove(self, c: Expr) -> None:
        del self._rigs[c]


class Ste:
    """One symbolic-term-exploration run over a single problem."""

    def __init__(self, problem, grammar: Grammar, partial: Optional[Expr] = None,
                 cfg: Optional[SteConfig] = None, budget: Optional[Budget] = None,
                 seed_inputs: Sequence[tuple[Value, ...]] = ()):
        self.problem = problem
        self.grammar = grammar
        self.partial = partial if partial is not None else Hole()
        self.cfg = cfg if cfg is not None else SteConfig()
        self.budget = budget if budget is not None else NoBudget()
        self.trace = SteTrace()
        self.store = generate_initial_examples(
            problem, problem.program, self.cfg.example_bound
        )
        for vec in seed_inputs:
            self.store.add(vec)
        self.enumerator = ValueEnumerator(problem.program)
        self._input_names = [p.name for p in problem.inputs]
        self._pi_items = problem.pi.checker_items()

    def run(self) -> Optional[Expr]:
        for n in range(1, self.cfg.max_size + 1):
            self.budget.check()
            stats = StratumStats(size=n)
            self.trace.strata.append(stats)
            candidates = unfold(self.grammar, n)
            stats.generated = len(candidates)
            if not candidates:
                continue
            pool = CandidateSet(
                self.problem, candidates, self.partial, self.cfg.check.fuel
            )
            self._concrete_test(pool, self.store.inputs, stats)
            while len(pool) > 0:
                self.budget.check()
                if len(pool) <= self.cfg.small_set_threshold:
                    winner = self._validate_each(pool, stats)
                    if winner is not None:
                        self.trace.solved_size = n
                        return winner
                    break
                pair = find_satisfying_pair(
                    list(pool), self.problem, self.cfg.check, self.partial,
                    self.enumerator,
                )
                if pair is None:
                    break
                candidate, _ = pair
                if self._validate(pool, candidate, stats):
                    self.trace.solved_size = n
                    return candidate
        return None

    # ---------------------------------------------------------- internals

    def _concrete_test(self, pool: CandidateSet, inputs_fn, stats: StratumStats) -> None:
        """Exclude candidates by concrete execution; failing inputs gain
        priority.  `inputs_fn` yields the inputs for one candidate (called
        fresh per candidate so reprioritization takes effect)."""
        for candidate in list(pool):
            interp, binds = pool.rig(candidate)
            for vec in inputs_fn():
                env0 = dict(zip(self._input_names, vec))
                r = check_one(interp, self._pi_items, binds, self.problem.spec, env0)
                if r == FAIL:
                    self.store.record_failure(vec)
                    pool.remove(candidate)
                    stats.pruned_by_tests += 1
                    self.trace.pruned_candidates.append(candidate)
                    break

    def _validate_each(self, pool: CandidateSet, stats: StratumStats) -> Optional[Expr]:
        for candidate in list(pool):
            if candidate not in pool:
                continue  # removed by an eager re-test meanwhile
            self.budget.check()
            if self._validate(pool, candidate, stats):
                return candidate
        return None

    def _validate(self, pool: CandidateSet, candidate: Expr, stats: StratumStats) -> bool:
        """Bounded verification of one candidate.  On a counterexample the
        candidate is dropped, the input joins the store, and the whole set is
        re-tested on that input right away."""
        self.budget.tick()
        stats.validated += 1
        verdict = check_candidate(
            self.problem, candidate, self.cfg.check, self.partial, self.enumerator
        )
        if isinstance(verdict, Valid):
            return True
        if isinstance(verdict, Counterexample):
            pool.remove(candidate)
            stats.pruned_by_counterexamples += 1
            self.trace.pruned_candidates.append(candidate)
            cex = verdict.inputs
            self.store.add(cex)
            self._concrete_test(pool, lambda: [cex], stats)
            return False
        return False  # Unknown: keep the candidate, it just cannot win


def ste(problem, grammar: Grammar, partial: Optional[Expr] = None,
        cfg: Optional[SteConfig] = None, budget: Optional[Budget] = None,
        seed_inputs: Sequence[tuple[Value, ...]] = ()) -> tuple[Optional[Expr], SteTrace]:
    """Run symbolic term exploration; returns (term or None, trace)."""
    runner = Ste(problem, grammar, partial, cfg, budget, seed_inputs)
    term = runner.run()
    return term, runner.trace
