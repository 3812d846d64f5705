"""Symbolic term exploration over size strata with concrete-test pruning."""
import random

import pytest

from synthe.budget import BudgetExpired, GranuleBudget
from synthe.checker import CheckConfig, FAIL, check_one
from synthe.grammar import problem_grammar, unfold
from synthe.lang import Hole, Variable
from synthe.rules import make_initial_problem
from synthe.ste import CandidateSet, Ste, SteConfig, ste

from conftest import build

# A needle-in-a-haystack problem: lots of helper functions blow up the
# size-<=4 stratum, but only f1 applied to (a, b, c) in that order computes
# 2a + 3b + 5c.  Every other candidate is a different linear combination,
# so concrete inputs separate them quickly.
NEEDLE_SRC = """
def h1(x: BigInt): BigInt = { x + x }
def h2(x: BigInt): BigInt = { 3 * x }
def h3(x: BigInt): BigInt = { 7 * x }
def h4(x: BigInt): BigInt = { x + 1 }
def g1(x: BigInt, y: BigInt): BigInt = { x + 2 * y }
def g2(x: BigInt, y: BigInt): BigInt = { 2 * x - y }
def g3(x: BigInt, y: BigInt): BigInt = { x - 4 * y }
def f1(x: BigInt, y: BigInt, z: BigInt): BigInt = { 2 * x + 3 * y + 5 * z }
def f2(x: BigInt, y: BigInt, z: BigInt): BigInt = { x + y + z }
def target(a: BigInt, b: BigInt, c: BigInt): BigInt = {
  choose { (out: BigInt) => out == 2 * a + 3 * b + 5 * c }
}
"""


def needle_problem():
    prog = build(NEEDLE_SRC)
    return make_initial_problem(prog, "target")


def needle_runner(**kw):
    problem = needle_problem()
    cfg = SteConfig(max_size=4, check=CheckConfig(input_depth=4))
    return Ste(problem, problem_grammar(problem), cfg=cfg, **kw)


def test_finds_unique_needle_at_size_4():
    runner = needle_runner()
    term = runner.run()
    assert term is not None
    from synthe.printer import print_expr

    assert print_expr(term) == "f1(a, b, c)"
    assert runner.trace.solved_size == 4
    generated = sum(s.generated for s in runner.trace.strata)
    assert generated >= 500


def test_every_pruned_candidate_fails_a_stored_input():
    runner = needle_runner()
    term = runner.run()
    assert term is not None
    pruned = runner.trace.pruned_candidates
    assert pruned
    inputs = runner.store.inputs()
    names = [p.name for p in runner.problem.inputs]
    pi_items = runner.problem.pi.checker_items()
    from synthe.checker import candidate_binds, candidate_program
    from synthe.interp import Interp

    for cand in pruned:
        interp = Interp(candidate_program(runner.problem, cand, runner.partial))
        binds = candidate_binds(runner.problem, cand)
        outcomes = [
            check_one(interp, pi_items, binds, runner.problem.spec,
                      dict(zip(names, vec)))
            for vec in inputs
        ]
        assert FAIL in outcomes, f"no stored input kills {cand}"


def test_concrete_test_survivors_ignore_input_order():
    survivor_sets = []
    for seed in (0, 1, 2):
        runner = needle_runner()
        candidates = unfold(runner.grammar, 4)
        pool = CandidateSet(
            runner.problem, candidates, runner.partial, runner.cfg.check.fuel
        )
        inputs = runner.store.inputs()
        random.Random(seed).shuffle(inputs)
        from synthe.ste import StratumStats

        runner._concrete_test(pool, lambda: inputs, StratumStats(size=4))
        survivor_sets.append(set(pool))
    assert survivor_sets[0] == survivor_sets[1] == survivor_sets[2]


def test_solves_identity_at_size_1():
    prog = build("""
adt List = Nil() | Cons(head: BigInt, tail: List)
def same(l: List): List = { choose { (out: List) => out == l } }
""")
    problem = make_initial_problem(prog, "same")
    term, trace = ste(problem, problem_grammar(problem),
                      cfg=SteConfig(max_size=3))
    assert term == Variable("l")
    assert trace.solved_size == 1


def test_returns_none_when_strata_are_exhausted():
    prog = build("""
def f(n: BigInt): BigInt = {
  choose { (out: BigInt) => out == n && out == n + 1 }
}
""")
    problem = make_initial_problem(prog, "f")
    term, trace = ste(problem, problem_grammar(problem),
                      cfg=SteConfig(max_size=3))
    assert term is None
    assert [s.size for s in trace.strata] == [1, 2, 3]
    assert all(s.validated >= 0 for s in trace.strata)


def test_generated_counts_match_the_grammar():
    runner = needle_runner()
    runner.run()
    g = runner.grammar
    for s in runner.trace.strata:
        assert s.generated == len(unfold(g, s.size))


def test_seed_inputs_join_the_store():
    problem = needle_problem()
    vec = (9, 9, 9)
    runner = Ste(problem, problem_grammar(problem),
                 cfg=SteConfig(max_size=2), seed_inputs=[vec])
    assert vec in runner.store


def test_budget_expiry_interrupts_the_run():
    # one validation granule gets spent on `n` in the first stratum; the
    # next stratum's budget check then fires
    prog = build("""
def sq(n: BigInt): BigInt = {
  require(5 < n)
  choose { (out: BigInt) => out == n * n }
}
""")
    problem = make_initial_problem(prog, "sq")
    runner = Ste(problem, problem_grammar(problem),
                 cfg=SteConfig(max_size=3, check=CheckConfig(input_depth=7)),
                 budget=GranuleBudget(1))
    with pytest.raises(BudgetExpired):
        runner.run()
    assert runner.trace.strata[0].validated == 1


def test_trace_summary_is_tab_separated():
    runner = needle_runner()
    runner.run()
    lines = runner.trace.summary_lines()
    assert len(lines) == len(runner.trace.strata)
    for line in lines:
        assert len(line.split("\t")) == 5
