"""Command-line driver: run one benchmark or a whole directory.

`synthe run file.lng` synthesizes the choose-function in the file and prints
a report; `synthe suite dir/` does so for every .lng file, writes JSONL, TSV
and PNG outputs, and compares statuses against a committed expectations file.

Exit codes for `run`: 0 Verified, 2 SolvedUnverified, 3 Failed, 1 on usage
or parse errors.  `suite` exits 1 on usage errors or status regressions.
"""
from __future__ import annotations

import argparse
import glob
import os
import sys
from typing import Optional

from .budget import GranuleBudget
from .checker import CheckConfig
from .figures import suite_figures
from .grammar import dump_grammar, problem_grammar
from .lang import (
    AdtType,
    BigIntType,
    BoolType,
    ConstructorApp,
    Choose,
    Expr,
    IntType,
    Literal,
    Program,
    TupleExpr,
    TupleType,
    TypeRef,
    UnaryOp,
)
from .mono import monomorphize
from .parser import ParseError, parse_expr, parse_program
from .report import (
    SynthesisReport,
    find_regressions,
    format_table,
    load_expectations,
    report_from_outcome,
    validate_report,
    write_jsonl,
    write_tsv,
)
from .rules import make_initial_problem
from .search import Failed, SearchConfig, SolvedUnverified, Verified, synthesize
from .smtlib import SmtDumper, set_dumper
from .ste import SteConfig
from .typecheck import TypecheckError, ctor_field_types, resolve_program
from .values import I32, Value


class UsageError(Exception):
    pass


def load_program(path: str) -> Program:
    try:
        with open(path) as fh:
            src = fh.read()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}")
    try:
        prog = resolve_program(parse_program(src))
    except (ParseError, TypecheckError) as e:
        raise UsageError(f"{path}: {e}")
    return monomorphize(prog)


def pick_function(prog: Program, requested: Optional[str]) -> str:
    chooseable = [f.name for f in prog.functions if isinstance(f.body, Choose)]
    if requested is not None:
        if requested not in prog.functions_by_name:
            raise UsageError(f"no function named {requested!r}")
        if requested not in chooseable:
            raise UsageError(f"function {requested!r} has no choose body")
        return requested
    if not chooseable:
        raise UsageError("no function with a choose body")
    if len(chooseable) > 1:
        raise UsageError(
            "several choose functions (%s); pick one with --function"
            % ", ".join(chooseable)
        )
    return chooseable[0]


# ------------------------------------------------------------ seed examples

def _value_of(e: Expr, t: TypeRef, prog: Program) -> Value:
    """Literal/constructor/tuple expression to a runtime value of type t."""
    if isinstance(e, UnaryOp) and e.op == "-":
        inner = _value_of(e.operand, t, prog)
        return I32(-inner.v) if isinstance(inner, I32) else -inner
    if isinstance(e, Literal):
        if isinstance(e.value, bool):
            if not isinstance(t, BoolType):
                raise UsageError(f"expected {t}, got boolean literal")
            return e.value
        if isinstance(t, IntType):
            return I32(e.value)
        if isinstance(t, BigIntType):
            return e.value
        raise UsageError(f"expected {t}, got integer literal")
    if isinstance(e, ConstructorApp):
        if not isinstance(t, AdtType) or e.ctor not in prog.ctor_to_adt:
            raise UsageError(f"expected {t}, got constructor {e.ctor}")
        ctor = prog.constructor(e.ctor)
        fts = ctor_field_types(prog, ctor, t.args)
        if len(fts) != len(e.args):
            raise UsageError(f"{e.ctor} takes {len(fts)} arguments")
        from .values import VCtor

        return VCtor(e.ctor, tuple(
            _value_of(a, ft, prog) for a, ft in zip(e.args, fts)
        ))
    if isinstance(e, TupleExpr):
        if not isinstance(t, TupleType) or len(t.elems) != len(e.elems):
            raise UsageError(f"expected {t}, got tuple")
        return tuple(_value_of(x, et, prog) for x, et in zip(e.elems, t.elems))
    raise UsageError("seed values may use literals, constructors and tuples only")


def _split_commas(line: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in line:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def load_seed_examples(path: str, prog: Program, fn_name: str) -> tuple:
    """One input vector per line, comma-separated value expressions."""
    fn = prog.functions_by_name[fn_name]
    vectors = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = _split_commas(line)
        if len(parts) != len(fn.params):
            raise UsageError(
                f"{path}:{lineno}: expected {len(fn.params)} values, got {len(parts)}"
            )
        vec = []
        for text, param in zip(parts, fn.params):
            try:
                e = parse_expr(text.strip())
            except ParseError as err:
                raise UsageError(f"{path}:{lineno}: {err}")
            vec.append(_value_of(e, param.type, prog))
        vectors.append(tuple(vec))
    return tuple(vectors)


# ------------------------------------------------------------------- driver

def build_config(args, seed_inputs: tuple = ()) -> SearchConfig:
    return SearchConfig(
        timeout=args.timeout,
        ste=SteConfig(
            max_size=args.max_size,
            check=CheckConfig(input_depth=args.verify_depth),
        ),
        verify_depth=args.verify_depth,
        seed_inputs=seed_inputs,
    )


def run_benchmark(path: str, args) -> tuple[SynthesisReport, int]:
    prog = load_program(path)
    fn_name = pick_function(prog, args.function)
    seeds = ()
    if args.seed_examples:
        seeds = load_seed_examples(args.seed_examples, prog, fn_name)
    if args.dump_grammar:
        g = problem_grammar(make_initial_problem(prog, fn_name))
        sys.stdout.write(dump_grammar(g, args.dump_grammar))
    if args.dump_smt:
        set_dumper(SmtDumper(args.dump_smt))
    try:
        budget = GranuleBudget(args.budget) if args.budget else None
        outcome = synthesize(prog, fn_name, build_config(args, seeds), budget)
    finally:
        set_dumper(None)
    name = os.path.splitext(os.path.basename(path))[0]
    report = report_from_outcome(name, prog, outcome)
    if isinstance(outcome.status, Verified):
        code = 0
    elif isinstance(outcome.status, SolvedUnverified):
        code = 2
    else:
        assert isinstance(outcome.status, Failed)
        code = 3
    return report, code


def print_report(report: SynthesisReport, trace_ste: bool) -> None:
    print(f"benchmark: {report.benchmark_name}")
    print(f"status: {report.status}")
    print(f"program size: {report.program_size}")
    if report.solution_size is not None:
        print(f"solution size: {report.solution_size}")
    print(f"wall clock: {report.wall_clock:.2f}s")
    if report.solution_text is not None:
        print("solution:")
        print(report.solution_text)
    if trace_ste and report.ste_trace_summary:
        print(report.ste_trace_summary)


def cmd_run(args) -> int:
    report, code = run_benchmark(args.path, args)
    print_report(report, args.trace_ste)
    return code


def cmd_suite(args) -> int:
    if not os.path.isdir(args.dir):
        raise UsageError(f"{args.dir}: not a directory")
    files = sorted(glob.glob(os.path.join(args.dir, "*.lng")))
    reports = []
    for path in files:
        report, _ = run_benchmark(path, args)
        reports.append(report)
        print(f"{report.benchmark_name}: {report.status} "
              f"({report.wall_clock:.2f}s)", flush=True)
        if args.trace_ste and report.ste_trace_summary:
            print(report.ste_trace_summary)
    print()
    print(format_table(reports))

    os.makedirs(args.out, exist_ok=True)
    for r in reports:
        validate_report(r.to_json())
    write_jsonl(reports, os.path.join(args.out, "reports.jsonl"))
    write_tsv(reports, os.path.join(args.out, "reports.tsv"))
    if reports:
        suite_figures(reports, args.out)

    expectations = args.expectations
    if expectations is None:
        default = os.path.join(args.dir, "expectations.json")
        expectations = default if os.path.exists(default) else None
    if expectations is not None:
        regressions = find_regressions(reports, load_expectations(expectations))
        if regressions:
            for line in regressions:
                print(f"regression: {line}", file=sys.stderr)
            return 1
    return 0


def make_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="synthe")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--function", help="function to synthesize")
        p.add_argument("--timeout", type=float, default=200.0,
                       help="wall-clock budget in seconds (default 200)")
        p.add_argument("--max-size", type=int, default=7,
                       help="largest candidate term size (default 7)")
        p.add_argument("--verify-depth", type=int, default=3,
                       help="input size bound for bounded checking (default 3)")
        p.add_argument("--dump-grammar", type=int, metavar="N",
                       help="print grammar expansions up to size N")
        p.add_argument("--dump-smt", metavar="DIR",
                       help="write checker queries as SMT-LIB2 files")
        p.add_argument("--trace-ste", action="store_true",
                       help="print per-stratum enumeration statistics")
        p.add_argument("--seed-examples", metavar="FILE",
                       help="extra input vectors, one comma-separated line each")
        p.add_argument("--sequential", action="store_true",
                       help="force sequential search (the only mode; accepted "
                            "for compatibility)")
        p.add_argument("--budget", type=int, metavar="N",
                       help="deterministic budget: at most N candidate "
                            "validations (overrides --timeout)")

    p_run = sub.add_parser("run", help="synthesize one benchmark file")
    p_run.add_argument("path")
    common(p_run)

    p_suite = sub.add_parser("suite", help="run every .lng file in a directory")
    p_suite.add_argument("dir")
    common(p_suite)
    p_suite.add_argument("--out", default="suite_out",
                         help="output directory for reports and figures")
    p_suite.add_argument("--expectations", metavar="FILE",
                         help="status expectations (default: dir/expectations.json)")

    return top


def main(argv: Optional[list[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_suite(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
