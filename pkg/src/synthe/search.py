"""AND/OR synthesis search.

Each open problem (OR node) expands into alternatives: a direct ground
solution, disjunction splitting, recursive-call introduction, one case split
per eligible variable, and finally symbolic term exploration.  Alternatives
compete on a best-first queue keyed by a solution-size lower bound, ties
broken by creation order.  Solving every child of an alternative recomposes
a solution and propagates upward; the root solution is installed as the
function body and re-verified by bounded checking.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .budget import Budget, BudgetExpired, WallClockBudget
from .checker import CheckConfig, Valid, verify_function
from .grammar import problem_grammar
from .lang import (
    Expr,
    Hole,
    Program,
    TRUE,
    Unsolved,
    expr_size,
    mk_and,
)
from .printer import print_expr
from .rules import (
    RuleApplication,
    Solution,
    SynthesisProblem,
    case_split_adt,
    case_split_candidates,
    ground_solve,
    introduce_rec_calls,
    make_initial_problem,
    split_disjunction,
)
from .ste import SteConfig, SteTrace, ste

OPEN = "open"
SOLVED = "solved"
FAILED = "failed"


@dataclass(frozen=True)
class SearchConfig:
    timeout: float = 200.0
    ste: SteConfig = field(default_factory=SteConfig)
    max_rule_depth: int = 6
    verify_depth: int = 3
    seed_inputs: tuple = ()


@dataclass(frozen=True)
class Verified:
    depth: int

    def describe(self) -> str:
        return f"Verified({self.depth})"


@dataclass(frozen=True)
class SolvedUnverified:
    def describe(self) -> str:
        return "SolvedUnverified"


@dataclass(frozen=True)
class Failed:
    reason: str  # "timeout" | "exhausted"

    def describe(self) -> str:
        return f"Failed({self.reason})"


class OrNode:
    def __init__(self, problem: SynthesisProblem, parent, depth: int, nid: int):
        self.problem = problem
        self.parent = parent  # (AndNode, child index) or None
        self.depth = depth
        self.id = nid
        self.status = OPEN
        self.solution: Optional[Solution] = None
        self.alternatives: list[AndNode] = []
        self.expanded = False


class AndNode:
    def __init__(self, application: Optional[RuleApplication], rule: str,
                 parent: OrNode, nid: int):
        self.application = application
        self.rule = rule
        self.parent = parent
        self.id = nid
        self.status = OPEN
        self.solution: Optional[Solution] = None
        self.children: list[OrNode] = []

    def cost(self) -> int:
        if not self.children:
            return 1  # closing rule still has to find one term
        total = 0
        for c in self.children:
            if c.status == SOLVED:
                total += expr_size(c.solution.term)
            else:
                total += 1
        return total


@dataclass
class SearchOutcome:
    status: object
    fn_name: str
    solution: Optional[Solution]
    program: Optional[Program]
    expansion_trace: list[str]
    ste_traces: list[tuple[int, SteTrace]]
    nodes_created: int
    wall_clock: float


class Search:
    def __init__(self, prog: Program, fn_name: str, cfg: SearchConfig,
                 budget: Optional[Budget] = None):
        self.prog = prog
        self.fn_name = fn_name
        self.cfg = cfg
        self.budget = budget if budget is not None else WallClockBudget(cfg.timeout)
        # one depth knob: candidate checking and final verification agree
        self.ste_cfg = replace(
            cfg.ste, check=replace(cfg.ste.check, input_depth=cfg.verify_depth)
        )
        self.trace: list[str] = []
        self.ste_traces: list[tuple[int, SteTrace]] = []
        self.queue: list = []
        self.seq = 0
        self.nodes = 0
        self.root = OrNode(make_initial_problem(prog, fn_name), None, 0, self._nid())

    def _nid(self) -> int:
        self.nodes += 1
        return self.nodes

    def _push(self, kind: str, node, cost: int) -> None:
        self.seq += 1
        heapq.heappush(self.queue, (cost, self.seq, kind, node))

    def _log(self, line: str) -> None:
        self.trace.append(line)

    # ------------------------------------------------------------- main loop

    def run(self) -> SearchOutcome:
        start = time.monotonic()
        status: object
        try:
            solution = self._search()
        except BudgetExpired:
            solution = None
            status = Failed("timeout")
        else:
            status = None
        if solution is None and status is None:
            status = Failed("exhausted")
        if solution is not None:
            prog2, status = self._finish(solution)
            return SearchOutcome(status, self.fn_name, solution, prog2,
                                 self.trace, self.ste_traces, self.nodes,
                                 time.monotonic() - start)
        self._log(f"failed {status.describe()}")
        return SearchOutcome(status, self.fn_name, None, None, self.trace,
                             self.ste_traces, self.nodes,
                             time.monotonic() - start)

    def _search(self) -> Optional[Solution]:
        self._push("expand", self.root, 0)
        while self.queue:
            self.budget.check()
            cost, seq, kind, node = heapq.heappop(self.queue)
            if self.root.status == SOLVED:
                break
            if self._abandoned(node):
                continue
            if kind == "expand":
                parent_cost = self._live_cost(node)
                if parent_cost > cost:
                    self._push("expand", node, parent_cost)
                    continue
                self._expand(node)
            else:  # run ste for a closing alternative
                current = node.cost()
                if current > cost:
                    self._push("ste", node, current)
                    continue
                self._run_ste(node)
        if self.root.status == SOLVED:
            return self.root.solution
        return None

    def _live_cost(self, or_node: OrNode) -> int:
        if or_node.parent is None:
            return 0
        return or_node.parent[0].cost()

    def _abandoned(self, node) -> bool:
        or_node = node if isinstance(node, OrNode) else node.parent
        while or_node is not None:
            if or_node.status != OPEN:
                return True
            and_parent = or_node.parent[0] if or_node.parent else None
            if and_parent is not None and and_parent.status != OPEN:
                return True
            or_node = and_parent.parent if and_parent is not None else None
        return False

    # ------------------------------------------------------------ expansion

    def _expand(self, or_node: OrNode) -> None:
        or_node.expanded = True
        problem = or_node.problem
        check_cfg = self.ste_cfg.check

        sol = ground_solve(problem, check_cfg)
        if sol is not None:
            self._log(f"#{or_node.id} ground-solved size {expr_size(sol.term)}")
            self._solve_or(or_node, sol)
            return

        apps: list[tuple[str, Optional[RuleApplication]]] = []
        if or_node.depth < self.cfg.max_rule_depth:
            split = split_disjunction(problem)
            if split is not None:
                apps.append(("split_disjunction", split))
            for app in introduce_rec_calls(problem):
                apps.append((f"introduce_rec_calls[{app.key}]", app))
            for var in case_split_candidates(problem):
                apps.append((f"case_split_adt[{var}]", case_split_adt(problem, var)))
        apps.append(("ste", None))

        seen = set()
        names = []
        for rule, app in apps:
            if app is not None:
                if app.fingerprint in seen:
                    continue
                seen.add(app.fingerprint)
            and_node = AndNode(app, rule, or_node, self._nid())
            or_node.alternatives.append(and_node)
            names.append(rule)
            if app is None:
                self._push("ste", and_node, and_node.cost())
                continue
            for i, sub in enumerate(app.subproblems):
                child = OrNode(sub, (and_node, i), or_node.depth + 1, self._nid())
                and_node.children.append(child)
            for child in and_node.children:
                self._push("expand", child, and_node.cost())
        self._log(f"expand #{or_node.id} depth {or_node.depth}: {', '.join(names)}")

    def _run_ste(self, and_node: AndNode) -> None:
        or_node = and_node.parent
        partial = partial_solution(or_node)
        grammar = problem_grammar(or_node.problem)
        term, trace = ste(or_node.problem, grammar, partial, self.ste_cfg,
                          self.budget, self.cfg.seed_inputs)
        self.ste_traces.append((or_node.id, trace))
        if term is None:
            self._log(f"ste #{or_node.id} exhausted")
            self._fail_and(and_node)
            return
        self._log(f"ste #{or_node.id} solved size {expr_size(term)}: {print_expr(term)}")
        and_node.solution = Solution(TRUE, term)
        and_node.status = SOLVED
        self._solve_or(or_node, and_node.solution)

    # ----------------------------------------------------------- propagation

    def _solve_or(self, or_node: OrNode, sol: Solution) -> None:
        if or_node.status != OPEN:
            return
        or_node.status = SOLVED
        or_node.solution = sol
        if or_node.parent is None:
            return
        and_node, _ = or_node.parent
        if and_node.status != OPEN:
            return
        if all(c.status == SOLVED for c in and_node.children):
            sols = tuple(c.solution for c in and_node.children)
            composed = and_node.application.recompose(sols)
            and_node.status = SOLVED
            and_node.solution = composed
            self._log(f"recompose #{and_node.parent.id} via {and_node.rule}")
            self._solve_or(and_node.parent, composed)

    def _fail_and(self, and_node: AndNode) -> None:
        if and_node.status != OPEN:
            return
        and_node.status = FAILED
        or_node = and_node.parent
        if or_node.status != OPEN or not or_node.expanded:
            return
        if all(a.status == FAILED for a in or_node.alternatives):
            self._fail_or(or_node)

    def _fail_or(self, or_node: OrNode) -> None:
        if or_node.status != OPEN:
            return
        or_node.status = FAILED
        self._log(f"fail #{or_node.id}")
        if or_node.parent is not None:
            self._fail_and(or_node.parent[0])

    # ---------------------------------------------------------- finalization

    def _finish(self, sol: Solution) -> tuple[Program, object]:
        fn = self.prog.functions_by_name[self.fn_name]
        prog2 = self.prog.with_function_body(self.fn_name, sol.term)
        if sol.pre != TRUE:
            fn2 = prog2.functions_by_name[self.fn_name]
            pre = sol.pre if fn.precondition is None else mk_and(fn.precondition, sol.pre)
            fn2 = replace(fn2, precondition=pre)
            prog2 = Program(
                prog2.adts,
                tuple(fn2 if f.name == self.fn_name else f for f in prog2.functions),
            )
        root = self.root.problem
        cfg = CheckConfig(input_depth=self.cfg.verify_depth, fuel=self.cfg.ste.check.fuel)
        verdict = verify_function(prog2, self.fn_name, tuple(root.outputs), root.spec, cfg)
        if isinstance(verdict, Valid):
            status: object = Verified(self.cfg.verify_depth)
        else:
            status = SolvedUnverified()
        self._log(f"verify {status.describe()}")
        return prog2, status


def partial_solution(or_node: OrNode) -> Expr:
    """The whole-function term with solved siblings materialized and a Hole
    standing for `or_node`'s own missing term."""
    acc: Expr = Hole()
    node = or_node
    while node.parent is not None:
        and_node, idx = node.parent
        sols = []
        for j, child in enumerate(and_node.children):
            if j == idx:
                sols.append(Solution(Unsolved(), acc))
            elif child.status == SOLVED:
                sols.append(child.solution)
            else:
                sols.append(Solution(Unsolved(), Unsolved()))
        acc = and_node.application.recompose(tuple(sols)).term
        node = and_node.parent
    return acc


def synthesize(prog: Program, fn_name: str, cfg: Optional[SearchConfig] = None,
               budget: Optional[Budget] = None) -> SearchOutcome:
    cfg = cfg if cfg is not None else SearchConfig()
    return Search(prog, fn_name, cfg, budget).run()
