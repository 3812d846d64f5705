"""Bounded exhaustive checking.

A check enumerates every input vector whose arguments each have size at most
`input_depth`, filters by the path condition, and evaluates the formula with
the candidate bindings installed.  Any evaluation error while computing a
candidate binding or the formula counts against the candidate; an evaluation
error inside the path condition only disqualifies the input.

Verdicts:
  * Valid          - no admitted input falsified the formula;
  * Counterexample - carries the first failing input vector;
  * Unknown        - every enumerated input ran out of fuel inside the path
                     condition, so nothing was actually tested.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .interp import DEFAULT_FUEL, EvalError, Interp
from .lang import Expr, FunctionCall, Param, Program, TupleSelect, Variable
from .values import Value, ValueEnumerator

# Ordered path-condition items:  ("fact", expr) | ("bind", name, expr).
PiItem = tuple


@dataclass(frozen=True)
class CheckConfig:
    input_depth: int = 3
    fuel: int = DEFAULT_FUEL


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Unknown:
    pass


@dataclass(frozen=True)
class Counterexample:
    inputs: tuple[Value, ...]


Verdict = object  # Valid | Unknown | Counterexample

VALID = Valid()
UNKNOWN = Unknown()

PASS = "pass"
FAIL = "fail"
SKIP = "skip"
SKIP_FUEL = "skip_fuel"


def check_one(
    interp: Interp,
    pi_items: Sequence[PiItem],
    cand_binds: Sequence[tuple[str, Expr]],
    formula: Expr,
    env0: dict[str, Value],
) -> str:
    """Outcome of one input vector: pass/fail/skip/skip_fuel."""
    env = dict(env0)
    for item in pi_items:
        if item[0] == "bind":
            _, name, rhs = item
            try:
                env[name] = interp.eval_expr(rhs, env)
            except EvalError as e:
                return SKIP_FUEL if e.kind == "fuel" else SKIP
        elif item[0] == "fact":
            try:
                v = interp.eval_expr(item[1], env)
            except EvalError as e:
                return SKIP_FUEL if e.kind == "fuel" else SKIP
            if v is not True:
                return SKIP
    for name, rhs in cand_binds:
        try:
            env[name] = interp.eval_expr(rhs, env)
        except EvalError:
            return FAIL
    try:
        return PASS if interp.eval_expr(formula, env) is True else FAIL
    except EvalError:
        return FAIL


def find_counterexample(
    prog: Program,
    params: tuple[Param, ...],
    pi_items: Sequence[PiItem],
    cand_binds: Sequence[tuple[str, Expr]],
    formula: Expr,
    cfg: CheckConfig,
    enumerator: Optional[ValueEnumerator] = None,
) -> Verdict:
    interp = Interp(prog, cfg.fuel)
    en = enumerator if enumerator is not None else ValueEnumerator(prog)
    total = 0
    fuel_skips = 0
    for vec in en.input_vectors(params, cfg.input_depth):
        total += 1
        env0 = {p.name: v for p, v in zip(params, vec)}
        r = check_one(interp, pi_items, cand_binds, formula, env0)
        if r == FAIL:
            return Counterexample(vec)
        if r == SKIP_FUEL:
            fuel_skips += 1
    if total > 0 and fuel_skips == total:
        return UNKNOWN
    return VALID


def function_check_parts(
    prog: Program, fn_name: str, outputs: tuple[Param, ...]
) -> tuple[tuple[Param, ...], list[PiItem], list[tuple[str, Expr]]]:
    """Π and candidate bindings for checking a solved function against a
    predicate over its outputs: call the function, destructure the result."""
    fn = prog.functions_by_name[fn_name]
    pi: list[PiItem] = []
    if fn.precondition is not None:
        pi.append(("fact", fn.precondition))
    call = FunctionCall(fn_name, tuple(Variable(p.name) for p in fn.params))
    binds: list[tuple[str, Expr]] = [("$res", call)]
    if len(outputs) == 1:
        binds.append((outputs[0].name, Variable("$res")))
    else:
        for i, out in enumerate(outputs):
            binds.append((out.name, TupleSelect(Variable("$res"), i)))
    return fn.params, pi, binds


def verify_function(
    prog: Program,
    fn_name: str,
    outputs: tuple[Param, ...],
    spec_pred: Expr,
    cfg: CheckConfig,
) -> Verdict:
    params, pi, binds = function_check_parts(prog, fn_name, outputs)
    return find_counterexample(prog, params, pi, binds, spec_pred, cfg)


# ---------------------------------------------------- problem-level checking

def candidate_binds(problem, candidate: Expr) -> tuple[tuple[str, Expr], ...]:
    """Bind the problem's output variables to (components of) the candidate."""
    outs = problem.outputs
    if len(outs) == 1:
        return ((outs[0].name, candidate),)
    binds = [("$cand", candidate)]
    for i, o in enumerate(outs):
        binds.append((o.name, TupleSelect(Variable("$cand"), i)))
    return tuple(binds)


def candidate_program(problem, candidate: Expr, partial: Optional[Expr]) -> Program:
    """Program used while testing `candidate`: the function under synthesis
    gets the candidate plugged into the current partial solution, so that
    recursive-call bindings in the path condition run the candidate itself."""
    if partial is None:
        return problem.program
    from .interp import plug

    body = plug(partial, candidate)
    return problem.program.with_function_body(problem.fn_name, body)


def check_candidate(
    problem,
    candidate: Expr,
    cfg: CheckConfig,
    partial: Optional[Expr] = None,
    enumerator: Optional[ValueEnumerator] = None,
) -> Verdict:
    """find_counterexample against a synthesis problem's spec."""
    from .smtlib import maybe_dump

    maybe_dump(problem, candidate, "validate")
    prog = candidate_program(problem, candidate, partial)
    return find_counterexample(
        prog,
        tuple(problem.inputs),
        problem.pi.checker_items(),
        candidate_binds(problem, candidate),
        problem.spec,
        cfg,
        enumerator=enumerator,
    )


def find_satisfying_pair(
    candidates: Sequence[Expr],
    problem,
    cfg: CheckConfig,
    partial: Optional[Expr] = None,
    enumerator: Optional[ValueEnumerator] = None,
) -> Optional[tuple[Expr, tuple[Value, ...]]]:
    """First (candidate, input) with the path condition and spec both true,
    searching input-major then candidate order; None if no pair exists."""
    if not candidates:
        return None
    from .smtlib import maybe_dump

    maybe_dump(problem, list(candidates), "satisfy")
    en = enumerator if enumerator is not None else ValueEnumerator(problem.program)
    pi_items = problem.pi.checker_items()
    names = [p.name for p in problem.inputs]
    rigs = [
        (
            c,
            Interp(candidate_program(problem, c, partial), cfg.fuel),
            candidate_binds(problem, c),
        )
        for c in candidates
    ]
    for vec in en.input_vectors(tuple(problem.inputs), cfg.input_depth):
        env0 = dict(zip(names, vec))
        for cand, interp, binds in rigs:
            if check_one(interp, pi_items, binds, problem.spec, env0) == PASS:
                return (cand, vec)
    return None
