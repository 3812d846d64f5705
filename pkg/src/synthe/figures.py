"""Suite result figures, rendered to PNG next to the delimited output."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import SynthesisReport  # noqa: E402


def _status_color(status: str) -> str:
    if status.startswith("Verified"):
        return "#2a9d4e"
    if status == "SolvedUnverified":
        return "#e9a23b"
    return "#d64541"


def wall_clock_figure(reports: list[SynthesisReport], path: str) -> None:
    names = [r.benchmark_name for r in reports]
    times = [max(r.wall_clock, 1e-3) for r in reports]
    colors = [_status_color(r.status) for r in reports]
    height = max(2.0, 0.35 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(8, height))
    ypos = range(len(names))
    ax.barh(ypos, times, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("wall clock (s, log scale)")
    ax.set_title("synthesis time per benchmark")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def size_figure(reports: list[SynthesisReport], path: str) -> None:
    solved = [r for r in reports if r.solution_size is not None]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if solved:
        xs = [r.program_size for r in solved]
        ys = [r.solution_size for r in solved]
        colors = [_status_color(r.status) for r in solved]
        ax.scatter(xs, ys, c=colors, s=36)
        for r, x, y in zip(solved, xs, ys):
            ax.annotate(r.benchmark_name, (x, y), fontsize=6,
                        xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel("program size (nodes)")
    ax.set_ylabel("solution size (nodes)")
    ax.set_title("solution size vs. program size")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def suite_figures(reports: list[SynthesisReport], outdir: str) -> list[str]:
    paths = [
        os.path.join(outdir, "wall_clock.png"),
        os.path.join(outdir, "sizes.png"),
    ]
    wall_clock_figure(reports, paths[0])
    size_figure(reports, paths[1])
    return paths
