"""Matplotlib figures for the report command and graph inspection."""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .causal import CausalGraph, classify
from .reduction import TotalizeMode
from .study import StudyRow


def save_mode_agreement_figure(rows: Sequence[StudyRow], path: str) -> None:
    """Bar chart: per goal mode, fraction of formulas where plan existence
    matches brute-force satisfiability."""
    modes = list(rows[0].plan_found) if rows else []
    labels = [m.value for m in modes]
    fractions = [
        sum(r.agrees(m) for r in rows) / len(rows) if rows else 0.0 for m in modes
    ]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    bars = ax.bar(labels, fractions, color=["#4c72b0", "#55a868", "#c44e52"][: len(labels)])
    for bar, frac in zip(bars, fractions):
        ax.text(
            bar.get_x() + bar.get_width() / 2,
            frac + 0.02,
            f"{frac:.2f}",
            ha="center",
            fontsize=9,
        )
    ax.set_ylim(0, 1.12)
    ax.set_ylabel("agreement with SAT oracle")
    ax.set_xlabel("goal mode")
    ax.set_title(f"plan existence vs satisfiability ({len(rows)} formulas)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_paper_mode_figure(rows: Sequence[StudyRow], path: str) -> None:
    """Bar chart: among satisfiable formulas, how often the fully totalized
    goal (mode 'paper') remains solvable, split by clause count."""
    by_k: dict[int, list[StudyRow]] = defaultdict(list)
    for row in rows:
        if row.satisfiable and TotalizeMode.PAPER in row.plan_found:
            by_k[row.case.num_clauses].append(row)
    ks = sorted(by_k)
    fractions = [
        sum(r.plan_found[TotalizeMode.PAPER] for r in by_k[k]) / len(by_k[k])
        for k in ks
    ]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    bars = ax.bar([str(k) for k in ks], fractions, color="#c44e52")
    for bar, frac, k in zip(bars, fractions, ks):
        ax.text(
            bar.get_x() + bar.get_width() / 2,
            frac + 0.02,
            f"{frac:.2f} (of {len(by_k[k])})",
            ha="center",
            fontsize=8,
        )
    ax.set_ylim(0, 1.12)
    ax.set_ylabel("fraction solvable")
    ax.set_xlabel("clauses in formula")
    ax.set_title("totalized goal (mode 'paper') on satisfiable formulas")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _layered_positions(graph: CausalGraph) -> dict:
    """Longest-path layering for DAGs; falls back to a circle otherwise."""
    report = classify(graph)
    if not report.is_dag:
        import math

        n = len(graph.vertices)
        return {
            v: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
            for i, v in enumerate(graph.vertices)
        }
    preds = {v: [] for v in graph.vertices}
    for src, dst in graph.edges:
        preds[dst].append(src)
    layer: dict = {}

    def depth(v):
        if v not in layer:
            layer[v] = 0 if not preds[v] else 1 + max(depth(p) for p in preds[v])
        return layer[v]

    for v in graph.vertices:
        depth(v)
    by_layer: dict[int, list] = defaultdict(list)
    for v in graph.vertices:
        by_layer[layer[v]].append(v)
    positions = {}
    for lay, members in by_layer.items():
        members.sort(key=lambda v: v.index)
        for row, v in enumerate(members):
            positions[v] = (float(lay) * 2.0, -(row - (len(members) - 1) / 2.0))
    return positions


def save_causal_graph_figure(graph: CausalGraph, path: str, title: str = "") -> None:
    positions = _layered_positions(graph)
    xs = [p[0] for p in positions.values()]
    ys = [p[1] for p in positions.values()]
    width = max(5.0, (max(xs) - min(xs) + 1) * 1.1) if xs else 5.0
    height = max(3.0, (max(ys) - min(ys) + 1) * 0.55) if ys else 3.0
    fig, ax = plt.subplots(figsize=(width, height))
    for src, dst in sorted(graph.edges, key=lambda e: (e[0].index, e[1].index)):
        ax.annotate(
            "",
            xy=positions[dst],
            xytext=positions[src],
            arrowprops=dict(arrowstyle="-|>", color="#555555", shrinkA=14, shrinkB=14),
        )
    for v, (x, y) in positions.items():
        ax.text(
            x,
            y,
            v.name,
            ha="center",
            va="center",
            fontsize=9,
            bbox=dict(boxstyle="round,pad=0.25", fc="#eef2fa", ec="#4c72b0"),
        )
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
