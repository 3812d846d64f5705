"""Benchmark reports: per-run records, the suite table, and regression checks.

One report per synthesis run, serialized as one JSON object per line for
machines and an aligned text table for people.  Timing is recorded but never
compared: regressions are status-only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import jsonschema

from .lang import Program, expr_size
from .search import Failed, SearchOutcome

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "benchmarkName", "programSize", "status", "wallClock",
        "steTraceSummary", "searchTrace",
    ],
    "properties": {
        "benchmarkName": {"type": "string"},
        "programSize": {"type": "integer", "minimum": 0},
        "solutionSize": {"type": ["integer", "null"], "minimum": 0},
        "status": {
            "type": "string",
            "pattern": r"^(Verified\(\d+\)|SolvedUnverified|Failed\((timeout|exhausted)\))$",
        },
        "wallClock": {"type": "number", "minimum": 0},
        "solutionText": {"type": ["string", "null"]},
        "steTraceSummary": {"type": "string"},
        "searchTrace": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}


@dataclass
class SynthesisReport:
    benchmark_name: str
    program_size: int
    status: str
    wall_clock: float
    solution_size: Optional[int]  # present iff not Failed
    solution_text: Optional[str]
    ste_trace_summary: str
    search_trace: list[str]

    def to_json(self) -> dict:
        return {
            "benchmarkName": self.benchmark_name,
            "programSize": self.program_size,
            "solutionSize": self.solution_size,
            "status": self.status,
            "wallClock": self.wall_clock,
            "solutionText": self.solution_text,
            "steTraceSummary": self.ste_trace_summary,
            "searchTrace": self.search_trace,
        }


def validate_report(record: dict) -> None:
    jsonschema.validate(record, REPORT_SCHEMA)


def program_size(prog: Program) -> int:
    return sum(expr_size(f.body) for f in prog.functions)


def ste_summary(outcome: SearchOutcome) -> str:
    lines = []
    for node_id, trace in outcome.ste_traces:
        tail = (
            f"solved at size {trace.solved_size}"
            if trace.solved_size is not None else "exhausted"
        )
        lines.append(f"ste node {node_id}: {tail}")
        lines.append("size\tgenerated\tpruned-tests\tpruned-cex\tvalidated")
        lines.extend(trace.summary_lines())
    return "\n".join(lines)


def report_from_outcome(name: str, prog: Program, outcome: SearchOutcome) -> SynthesisReport:
    failed = isinstance(outcome.status, Failed)
    sol_size = None
    sol_text = None
    if not failed and outcome.solution is not None:
        from .printer import print_expr

        sol_size = expr_size(outcome.solution.term)
        sol_text = print_expr(outcome.solution.term, prog=prog)
    return SynthesisReport(
        benchmark_name=name,
        program_size=program_size(prog),
        status=outcome.status.describe(),
        wall_clock=outcome.wall_clock,
        solution_size=sol_size,
        solution_text=sol_text,
        ste_trace_summary=ste_summary(outcome),
        search_trace=list(outcome.expansion_trace),
    )


def write_jsonl(reports: list[SynthesisReport], path: str) -> None:
    with open(path, "w") as fh:
        for r in reports:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")


TSV_COLUMNS = ["benchmark", "prog", "sol", "status", "seconds"]


def _row(r: SynthesisReport) -> list[str]:
    return [
        r.benchmark_name,
        str(r.program_size),
        "-" if r.solution_size is None else str(r.solution_size),
        r.status,
        f"{r.wall_clock:.2f}",
    ]


def write_tsv(reports: list[SynthesisReport], path: str) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(TSV_COLUMNS) + "\n")
        for r in reports:
            fh.write("\t".join(_row(r)) + "\n")


def format_table(reports: list[SynthesisReport]) -> str:
    rows = [TSV_COLUMNS] + [_row(r) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TSV_COLUMNS))]
    lines = []
    for row in rows:
        cells = [c.ljust(w) for c, w in zip(row, widths)]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def load_expectations(path: str) -> dict[str, str]:
    with open(path) as fh:
        return json.load(fh)


def find_regressions(
    reports: list[SynthesisReport], expected: dict[str, str]
) -> list[str]:
    """Status mismatches against the committed expectations, one message per
    benchmark; benchmarks absent from the expectations are not regressions."""
    seen = {r.benchmark_name: r.status for r in reports}
    out = []
    for name, want in sorted(expected.items()):
        got = seen.get(name)
        if got is None:
            out.append(f"{name}: expected {want}, benchmark missing from run")
        elif got != want:
            out.append(f"{name}: expected {want}, got {got}")
    return out
