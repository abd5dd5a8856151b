"""Report rendering: delimited files plus matplotlib figures.

Used by the CLI's report path; every function writes one file and returns
its path so callers can list what was produced.
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .dfg import DFG, render_node
from .model import EventLog, StatisticsReport
from .tlkc import SuppressionReport


def _short(label: str, limit: int = 14) -> str:
    return label if len(label) <= limit else label[: limit - 1] + "…"


def write_statistics_csv(stats: StatisticsReport, path: Path) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["metric", "value"])
        for metric, value in stats.to_dict().items():
            writer.writerow([metric, "" if value is None else value])
    return path


def activity_counts(log: EventLog) -> Counter:
    return Counter(e.activity for t in log.traces for e in t.events)


def write_activity_csv(log: EventLog, path: Path) -> Path:
    counts = activity_counts(log)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["activity", "events"])
        for activity in sorted(counts):
            writer.writerow([activity, counts[activity]])
    return path


def save_activity_figure(log: EventLog, path: Path) -> Path:
    counts = activity_counts(log)
    activities = sorted(counts, key=lambda a: (-counts[a], a))
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(activities) + 2), 3.5))
    ax.bar(range(len(activities)), [counts[a] for a in activities], color="#4878a8")
    ax.set_xticks(range(len(activities)))
    ax.set_xticklabels([_short(a) for a in activities], rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("events")
    ax.set_title(f"Activity frequencies: {log.name or 'event log'}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_dfg_csv(dfg: DFG, path: Path) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["from", "to", "frequency"])
        for (source, target), freq in sorted(dfg.edges.items()):
            writer.writerow([render_node(source), render_node(target), freq])
    return path


def _layer_nodes(dfg: DFG) -> dict[str, int]:
    """BFS layering from the start node; unreachable nodes go last."""
    from .model import START

    succ: dict[str, list[str]] = {}
    for source, target in dfg.edges:
        succ.setdefault(source, []).append(target)
    layers = {START: 0} if START in dfg.nodes() else {}
    frontier = [START] if layers else []
    while frontier:
        nxt = []
        for node in frontier:
            for target in succ.get(node, ()):
                if target not in layers:
                    layers[target] = layers[node] + 1
                    nxt.append(target)
        frontier = nxt
    deepest = max(layers.values(), default=0)
    for node in sorted(dfg.nodes()):
        layers.setdefault(node, deepest + 1)
    return layers


def save_dfg_figure(dfg: DFG, path: Path, title: str = "directly-follows graph") -> Path:
    """Layered left-to-right drawing; edge width scales with frequency."""
    layers = _layer_nodes(dfg)
    by_layer: dict[int, list[str]] = {}
    for node, layer in layers.items():
        by_layer.setdefault(layer, []).append(node)
    positions: dict[str, tuple[float, float]] = {}
    for layer, nodes in by_layer.items():
        for i, node in enumerate(sorted(nodes)):
            positions[node] = (float(layer), -float(i) + (len(nodes) - 1) / 2.0)

    width = max(5.0, 1.8 * (max(by_layer) + 1))
    height = max(3.0, 0.9 * max(len(v) for v in by_layer.values()))
    fig, ax = plt.subplots(figsize=(width, height))
    max_freq = max(dfg.edges.values(), default=1)
    for (source, target), freq in sorted(dfg.edges.items()):
        x0, y0 = positions[source]
        x1, y1 = positions[target]
        rad = 0.25 if (x1 - x0) <= 0 or abs(y1 - y0) < 1e-9 and source != target else 0.08
        ax.annotate(
            "",
            xy=(x1, y1),
            xytext=(x0, y0),
            arrowprops=dict(
                arrowstyle="-|>",
                color="#555555",
                lw=0.6 + 2.4 * freq / max_freq,
                alpha=0.75,
                connectionstyle=f"arc3,rad={rad}",
                shrinkA=14,
                shrinkB=14,
            ),
        )
        ax.text(
            (x0 + x1) / 2.0,
            (y0 + y1) / 2.0 + (0.18 if rad > 0.1 else 0.08),
            str(freq),
            fontsize=7,
            color="#333333",
            ha="center",
        )
    for node, (x, y) in positions.items():
        ax.plot(x, y, "o", markersize=24, color="#dce7f2", markeredgecolor="#4878a8", zorder=3)
        ax.text(x, y, _short(render_node(node), 10), fontsize=7, ha="center", va="center", zorder=4)
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_suppression_csv(report: SuppressionReport, path: Path) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "activity", "score", "suppressed"])
        for i, iteration in enumerate(report.iterations, start=1):
            for activity in sorted(iteration.scores):
                writer.writerow(
                    [i, activity, f"{iteration.scores[activity]:.6f}", activity == iteration.suppressed]
                )
    return path


def save_comparison_figure(
    before: Mapping[str, int],
    after: Mapping[str, int],
    path: Path,
    title: str = "activity frequencies before/after",
) -> Path:
    activities = sorted(set(before) | set(after), key=lambda a: (-before.get(a, 0), a))
    xs = range(len(activities))
    fig, ax = plt.subplots(figsize=(max(4, 0.7 * len(activities) + 2), 3.5))
    ax.bar([x - 0.2 for x in xs], [before.get(a, 0) for a in activities], width=0.4, label="before", color="#4878a8")
    ax.bar([x + 0.2 for x in xs], [after.get(a, 0) for a in activities], width=0.4, label="after", color="#d9822b")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([_short(a) for a in activities], rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("events")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_groups_csv(report_dict: dict, path: Path) -> Path:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["group", "members", "surrogates"])
        for group in report_dict.get("groups", []):
            writer.writerow([group["id"], ";".join(group["members"]), ";".join(group["surrogates"])])
    return path


def save_group_sizes_figure(report_dict: dict, path: Path) -> Path:
    groups = report_dict.get("groups", [])
    ids = [f"G{g['id']}" for g in groups]
    sizes = [len(g["members"]) for g in groups]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(ids) + 2), 3.0))
    ax.bar(ids, sizes, color="#4878a8")
    ax.set_ylabel("members")
    ax.set_title("role group sizes")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
