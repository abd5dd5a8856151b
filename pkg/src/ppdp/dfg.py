"""Directly-follows graph discovery and comparison.

The DFG is the utility oracle of the toolkit: techniques are judged by how
much of it they preserve. Every discovered graph carries artificial start
and end nodes so that trace boundaries are counted; the reserved internal
names are rendered as the conventional play/stop glyphs on output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .model import END, START, EventLog

START_GLYPH = "▶"  # rendered form of the artificial start node
END_GLYPH = "■"

_RENDER = {START: START_GLYPH, END: END_GLYPH}
_UNRENDER = {START_GLYPH: START, END_GLYPH: END}


@dataclass(frozen=True)
class DFG:
    """Weighted edge map (source, target) -> frequency."""

    edges: Mapping[tuple[str, str], int]

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self.edges)

    def frequency(self, source: str, target: str) -> int:
        return self.edges.get((source, target), 0)

    def nodes(self) -> set[str]:
        found = set()
        for source, target in self.edges:
            found.add(source)
            found.add(target)
        return found

    def edge_count(self) -> int:
        return len(self.edges)

    def total_frequency(self) -> int:
        return sum(self.edges.values())


def discover_dfg(log: EventLog) -> DFG:
    """Count how often each activity directly follows another.

    Each trace contributes (start, first) and (last, end); an empty trace
    contributes a single (start, end) edge.
    """
    edges: dict[tuple[str, str], int] = {}

    def bump(source: str, target: str) -> None:
        edges[(source, target)] = edges.get((source, target), 0) + 1

    for trace in log.traces:
        acts = trace.activities
        if not acts:
            bump(START, END)
            continue
        bump(START, acts[0])
        for i in range(len(acts) - 1):
            bump(acts[i], acts[i + 1])
        bump(acts[-1], END)
    return DFG(edges=edges)


@dataclass(frozen=True)
class DiffReport:
    """Edge-level difference between a reference and a candidate DFG."""

    added: tuple[tuple[str, str], ...]
    removed: tuple[tuple[str, str], ...]
    deltas: Mapping[tuple[str, str], int]
    total_error: int

    @property
    def is_identical(self) -> bool:
        return self.total_error == 0 and not self.added and not self.removed


def dfg_diff(reference: DFG, candidate: DFG) -> DiffReport:
    """Report added/removed edges and per-edge frequency deltas
    (candidate minus reference); total error is the L1 distance."""
    ref = reference.edges
    cand = candidate.edges
    union = sorted(set(ref) | set(cand))
    deltas = {}
    total = 0
    for edge in union:
        delta = cand.get(edge, 0) - ref.get(edge, 0)
        if delta:
            deltas[edge] = delta
        total += abs(delta)
    return DiffReport(
        added=tuple(e for e in union if e not in ref),
        removed=tuple(e for e in union if e not in cand),
        deltas=deltas,
        total_error=total,
    )


def render_node(name: str) -> str:
    return _RENDER.get(name, name)


def dfg_to_json_dict(dfg: DFG) -> dict:
    """JSON form used by the preview endpoint and the CLI."""
    return {
        "edges": [
            {"from": render_node(s), "to": render_node(t), "freq": f}
            for (s, t), f in sorted(dfg.edges.items())
        ]
    }


def dfg_from_json_dict(payload: dict) -> DFG:
    edges = {}
    for item in payload.get("edges", []):
        source = _UNRENDER.get(item["from"], item["from"])
        target = _UNRENDER.get(item["to"], item["to"])
        edges[(source, target)] = int(item["freq"])
    return DFG(edges=edges)
