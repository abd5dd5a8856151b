"""Privacy-aware role mining: substitute resource values so that role
structure survives while individual who-did-what links are broken.

Resources are grouped by cosine similarity of their activity-count
profiles (connected components at a threshold), then rewritten per one of
three techniques:

* ``fixed_value``   - every member of a group becomes one fixed surrogate.
* ``selective``     - groups below the minimum size are collapsed like
  fixed_value; members of larger groups receive within-group shuffled
  pseudonyms, and the pseudonym labels of every (group, activity) cell are
  permuted across the cell's events in seeded random order, so event-level
  who-did-what links are broken while each pseudonym keeps a member-shaped
  profile.
* ``frequency_based`` - per (group, activity) cell, pseudonyms receive
  event counts apportioned to the original member frequencies of that cell
  (largest remainder, ties by pseudonym index), so the frequency shape a
  role miner consumes survives exactly; which events land on which
  pseudonym is seeded-random.

All three preserve per-(group, activity) event totals exactly, which is
what a role miner consumes.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Mapping, Optional, Sequence

from .errors import NoResources, ParameterInvalid
from .metadata import append_op
from .model import EventLog

ROLE_TECHNIQUES = ("fixed_value", "selective", "frequency_based")

_SURROGATE_RE = re.compile(r"^G(\d+)(?:#\d+)?$")


@dataclass(frozen=True)
class ResourceActivityMatrix:
    """Counts of (resource, activity) pairs over events that carry a
    resource."""

    counts: Mapping[tuple[str, str], int]

    def resources(self) -> tuple[str, ...]:
        return tuple(sorted({r for r, _ in self.counts}))

    def profile(self, resource: str) -> dict[str, int]:
        return {a: n for (r, a), n in self.counts.items() if r == resource}

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class RoleGroup:
    id: int
    members: frozenset[str]


@dataclass(frozen=True)
class RoleAnonConfig:
    technique: str = "fixed_value"
    similarity_threshold: float = 0.7
    selective_min_group_size: int = 2
    rng_seed: int = 0

    def __post_init__(self):
        if self.technique not in ROLE_TECHNIQUES:
            raise ParameterInvalid(f"technique must be one of {ROLE_TECHNIQUES}, got {self.technique!r}")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ParameterInvalid("similarity_threshold must lie in [0, 1]")
        if self.selective_min_group_size < 1:
            raise ParameterInvalid("selective_min_group_size must be positive")


@dataclass(frozen=True)
class RoleAnonReport:
    """Group table, surrogate assignment, and warnings for one run."""

    technique: str
    groups: tuple[RoleGroup, ...]
    surrogates: Mapping[str, int]  # surrogate name -> group id
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "technique": self.technique,
            "groups": [
                {
                    "id": g.id,
                    "members": sorted(g.members),
                    "surrogates": sorted(s for s, gid in self.surrogates.items() if gid == g.id),
                }
                for g in self.groups
            ],
            "warnings": list(self.warnings),
        }


def build_matrix(log: EventLog) -> ResourceActivityMatrix:
    """Count events per (resource, activity); events without a resource
    are ignored."""
    counts: dict[tuple[str, str], int] = {}
    for trace in log.traces:
        for event in trace.events:
            if event.resource is None:
                continue
            key = (event.resource, event.activity)
            counts[key] = counts.get(key, 0) + 1
    if not counts:
        raise NoResources("no event in the log carries a resource")
    return ResourceActivityMatrix(counts=counts)


def _cosine(p: Mapping[str, int], q: Mapping[str, int]) -> float:
    dot = sum(n * q.get(a, 0) for a, n in p.items())
    norm_p = math.sqrt(sum(n * n for n in p.values()))
    norm_q = math.sqrt(sum(n * n for n in q.values()))
    if norm_p == 0.0 or norm_q == 0.0:
        return 0.0
    return dot / (norm_p * norm_q)


def discover_role_groups(matrix: ResourceActivityMatrix, threshold: float) -> list[RoleGroup]:
    """Connected components of the resource graph whose edges join
    profiles with cosine similarity >= threshold. Group ids follow the
    lexicographically smallest member, ascending."""
    if not 0.0 <= threshold <= 1.0:
        raise ParameterInvalid("threshold must lie in [0, 1]")
    resources = matrix.resources()
    profiles = {r: matrix.profile(r) for r in resources}
    parent = {r: r for r in resources}

    def find(r: str) -> str:
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    for i, r in enumerate(resources):
        for q in resources[i + 1 :]:
            if _cosine(profiles[r], profiles[q]) >= threshold:
                parent[find(q)] = find(r)

    components: dict[str, set[str]] = {}
    for r in resources:
        components.setdefault(find(r), set()).add(r)
    ordered = sorted(components.values(), key=min)
    return [RoleGroup(id=i, members=frozenset(members)) for i, members in enumerate(ordered, start=1)]


def _largest_remainder(total: int, weights: Sequence[int]) -> list[int]:
    """Apportion ``total`` integer units proportionally to ``weights``;
    ties in the fractional remainders go to the lower index."""
    weight_sum = sum(weights)
    quotas = [total * w / weight_sum for w in weights]
    shares = [int(q) for q in quotas]
    short = total - sum(shares)
    by_remainder = sorted(range(len(weights)), key=lambda k: (-(quotas[k] - shares[k]), k))
    for k in by_remainder[:short]:
        shares[k] += 1
    return shares


def anonymize_roles(
    log: EventLog,
    config: RoleAnonConfig,
    created_at: Optional[datetime] = None,
) -> tuple[EventLog, RoleAnonReport]:
    """Rewrite resource values per the configured technique.

    Activities, timestamps, trace structure and all non-resource
    attributes are untouched; the log's privacy metadata gains one
    "role-decomposition" operation. Deterministic for a fixed
    (log, config, created_at).
    """
    if created_at is None:
        created_at = datetime.now(timezone.utc)
    matrix = build_matrix(log)
    groups = discover_role_groups(matrix, config.similarity_threshold)
    rng = random.Random(config.rng_seed)
    group_of = {member: g for g in groups for member in g.members}

    # Assignments are computed cell by cell in a fixed order (group id,
    # then activity) so the seeded RNG stream is reproducible.
    assignment: dict[tuple[int, int], str] = {}  # (trace idx, event idx) -> surrogate
    cells: dict[tuple[int, str], list[tuple[int, int]]] = {}
    for ti, trace in enumerate(log.traces):
        for ei, event in enumerate(trace.events):
            if event.resource is None:
                continue
            group = group_of[event.resource]
            cells.setdefault((group.id, event.activity), []).append((ti, ei))

    surrogates: dict[str, int] = {}
    collapse_all = config.technique == "fixed_value"
    for group in groups:
        members = sorted(group.members)
        collapsed = collapse_all or (
            config.technique == "selective" and len(members) < config.selective_min_group_size
        )
        if collapsed:
            name = f"G{group.id}"
            surrogates[name] = group.id
            for (gid, activity), slots in cells.items():
                if gid != group.id:
                    continue
                for slot in slots:
                    assignment[slot] = name
            continue

        names = [f"G{group.id}#{k}" for k in range(1, len(members) + 1)]
        for name in names:
            surrogates[name] = group.id
        group_cells = sorted(
            (activity, slots) for (gid, activity), slots in cells.items() if gid == group.id
        )
        if config.technique == "selective":
            shuffled = list(names)
            rng.shuffle(shuffled)
            pseudonym_of = dict(zip(members, shuffled))
            event_member = {
                (ti, ei): log.traces[ti].events[ei].resource for _, slots in group_cells for ti, ei in slots
            }
            for _, slots in group_cells:
                labels = [pseudonym_of[event_member[slot]] for slot in slots]
                rng.shuffle(labels)
                for slot, label in zip(slots, labels):
                    assignment[slot] = label
        else:  # frequency_based
            for activity, slots in group_cells:
                weights = [matrix.counts.get((m, activity), 0) for m in members]
                shares = _largest_remainder(len(slots), weights)
                labels = [name for name, share in zip(names, shares) for _ in range(share)]
                rng.shuffle(labels)
                for slot, label in zip(slots, labels):
                    assignment[slot] = label

    new_traces = []
    for ti, trace in enumerate(log.traces):
        new_events = tuple(
            replace(event, resource=assignment[(ti, ei)]) if event.resource is not None else event
            for ei, event in enumerate(trace.events)
        )
        new_traces.append(replace(trace, events=new_events))

    result = EventLog(
        name=log.name,
        traces=tuple(new_traces),
        global_attributes=log.global_attributes,
        metadata=append_op(
            log.metadata,
            "role-decomposition",
            {
                "technique": config.technique,
                "similarity_threshold": config.similarity_threshold,
                "selective_min_group_size": config.selective_min_group_size,
                "rng_seed": config.rng_seed,
            },
            created_at,
        ),
    )
    warnings = _collect_warnings(matrix, groups, result)
    report = RoleAnonReport(
        technique=config.technique,
        groups=tuple(groups),
        surrogates=surrogates,
        warnings=warnings,
    )
    return result, report


def _collect_warnings(
    matrix: ResourceActivityMatrix,
    groups: Sequence[RoleGroup],
    anonymized: EventLog,
) -> tuple[str, ...]:
    warnings = []
    for group in groups:
        if len(group.members) == 1:
            warnings.append(
                f"SingletonGroupWarning: group G{group.id} has a single member; "
                "its surrogate is trivially re-identifiable"
            )
    anon_matrix = build_matrix(anonymized)
    member_profiles = {
        (g.id, frozenset(matrix.profile(m).items())) for g in groups if len(g.members) >= 2 for m in g.members
    }
    for surrogate in anon_matrix.resources():
        m = _SURROGATE_RE.match(surrogate)
        if m is None:
            continue
        gid = int(m.group(1))
        profile = frozenset(anon_matrix.profile(surrogate).items())
        if (gid, profile) in member_profiles:
            warnings.append(
                f"ProfileEqualityWarning: surrogate {surrogate} has the exact activity "
                "profile of an original group member"
            )
    return tuple(warnings)


def surrogate_group_id(resource: str, groups: Sequence[RoleGroup]) -> Optional[int]:
    """Map an anonymized resource back to its group: by the surrogate
    naming convention, or by membership for identity comparisons."""
    m = _SURROGATE_RE.match(resource)
    if m is not None:
        gid = int(m.group(1))
        if any(g.id == gid for g in groups):
            return gid
    for group in groups:
        if resource in group.members:
            return group.id
    return None


def verify_group_preservation(
    original: EventLog,
    anonymized: EventLog,
    groups: Sequence[RoleGroup],
) -> bool:
    """True iff per-(group, activity) event totals are identical between
    the original members and the anonymized surrogates."""
    orig_matrix = build_matrix(original)
    anon_matrix = build_matrix(anonymized)
    group_of = {member: g.id for g in groups for member in g.members}

    orig_totals: dict[tuple[int, str], int] = {}
    for (resource, activity), n in orig_matrix.counts.items():
        gid = group_of.get(resource)
        if gid is None:
            return False
        key = (gid, activity)
        orig_totals[key] = orig_totals.get(key, 0) + n

    anon_totals: dict[tuple[int, str], int] = {}
    for (resource, activity), n in anon_matrix.counts.items():
        gid = surrogate_group_id(resource, groups)
        if gid is None:
            return False
        key = (gid, activity)
        anon_totals[key] = anon_totals.get(key, 0) + n

    return orig_totals == anon_totals
