"""Figures for bench reports."""

from __future__ import annotations

from collections import OrderedDict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import BenchRow  # noqa: E402

_COLORS = {"full": "#4c72b0", "dcc": "#dd8452"}


def plot_rows(rows: Sequence[BenchRow], path: str, title: str = "Full NMR check vs. dynamic consistency checking") -> None:
    """Grouped bars per (problem, query): wall time (log) and sub-check invocations."""
    groups: "OrderedDict[tuple[str, str], dict[str, BenchRow]]" = OrderedDict()
    for r in rows:
        groups.setdefault((r.problem, r.query), {})[r.mode] = r
    labels = [f"{p}\n{q}" for p, q in groups]
    x = range(len(groups))
    width = 0.38

    fig, axes = plt.subplots(2, 1, figsize=(max(6.0, 1.1 * len(groups) + 2), 7), sharex=True)
    for ax, attr, ylabel in (
        (axes[0], "wall_time", "median time (s)"),
        (axes[1], "subcheck_invocations", "sub-check invocations"),
    ):
        for k, mode in enumerate(("full", "dcc")):
            vals = [getattr(g[mode], attr) if mode in g else 0 for g in groups.values()]
            xs = [i + (k - 0.5) * width for i in x]
            ax.bar(xs, vals, width, label=mode, color=_COLORS[mode])
        ax.set_ylabel(ylabel)
        ax.set_yscale("symlog" if attr == "subcheck_invocations" else "log")
        ax.grid(axis="y", alpha=0.3)
    axes[0].set_title(title)
    axes[0].legend(frameon=False)
    axes[1].set_xticks(list(x))
    axes[1].set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
