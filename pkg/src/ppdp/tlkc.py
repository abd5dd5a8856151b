"""TLKC privacy: timestamp generalization plus greedy global activity
suppression until every background-knowledge candidate of power <= L has
support >= K and sensitive-value confidence <= C.

Background knowledge comes in four flavors of what an adversary may know
about one case:

* ``set``      - which activities occurred,
* ``multiset`` - how often each occurred,
* ``sequence`` - in which order (non-contiguous subsequence),
* ``relative`` - order plus timestamp offsets at granularity T from the
  first known event.

Candidate enumeration is exact and therefore guarded: L <= 4, at most 20
distinct activities, traces no longer than 25 events.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from itertools import combinations
from typing import Mapping, Optional

from .errors import GuardExceeded, ParameterInvalid
from .metadata import append_op
from .model import EventLog, Trace

GRANULARITY_MS = {
    "milliseconds": 1,
    "seconds": 1_000,
    "minutes": 60_000,
    "hours": 3_600_000,
    "days": 86_400_000,
}

BACKGROUND_TYPES = ("set", "multiset", "sequence", "relative")

MAX_L = 4
MAX_DISTINCT_ACTIVITIES = 20
MAX_TRACE_LENGTH = 25

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class TLKCConfig:
    T: str = "hours"
    L: int = 2
    K: int = 2
    C: float = 1.0
    background: str = "sequence"
    sensitive_attribute: Optional[str] = None

    def __post_init__(self):
        if self.T not in GRANULARITY_MS:
            raise ParameterInvalid(f"T must be one of {tuple(GRANULARITY_MS)}, got {self.T!r}")
        if self.background not in BACKGROUND_TYPES:
            raise ParameterInvalid(f"background must be one of {BACKGROUND_TYPES}, got {self.background!r}")
        if self.L < 1:
            raise ParameterInvalid("L must be a positive integer")
        if self.K < 1:
            raise ParameterInvalid("K must be a positive integer")
        if not 0.0 <= self.C <= 1.0:
            raise ParameterInvalid("C must lie in [0, 1]")

    @property
    def effective_c(self) -> float:
        # without a sensitive attribute there is nothing to bound
        return self.C if self.sensitive_attribute is not None else 1.0

    def parameters(self) -> dict[str, object]:
        params: dict[str, object] = {
            "T": self.T,
            "L": self.L,
            "K": self.K,
            "C": self.C,
            "background": self.background,
        }
        if self.sensitive_attribute is not None:
            params["sensitive_attribute"] = self.sensitive_attribute
        return params


@dataclass(frozen=True)
class Candidate:
    """One piece of background knowledge in canonical form.

    ``items`` holds sorted activities for set/multiset, the activity
    sequence for sequence, and (activity, offset-in-T-units) pairs with a
    zero first offset for relative.
    """

    background: str
    items: tuple

    def __post_init__(self):
        if not 1 <= len(self.items):
            raise ParameterInvalid("candidates must contain at least one item")

    @property
    def size(self) -> int:
        return len(self.items)

    def activities(self) -> tuple[str, ...]:
        if self.background == "relative":
            return tuple(a for a, _ in self.items)
        return tuple(self.items)


@dataclass(frozen=True)
class ViolationEntry:
    candidate: Candidate
    support: int
    max_confidence: float
    sensitive_value: Optional[str] = None


@dataclass(frozen=True)
class ViolationReport:
    minimal_violations: tuple[ViolationEntry, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.minimal_violations)


@dataclass(frozen=True)
class SuppressionIteration:
    scores: Mapping[str, float]
    suppressed: str


@dataclass(frozen=True)
class SuppressionReport:
    suppressed: tuple[str, ...]
    iterations: tuple[SuppressionIteration, ...]
    events_removed: int
    empty_traces: int
    all_suppressed: bool

    def to_dict(self) -> dict:
        return {
            "suppressed": list(self.suppressed),
            "iterations": [
                {"scores": dict(sorted(it.scores.items())), "suppressed": it.suppressed}
                for it in self.iterations
            ],
            "events_removed": self.events_removed,
            "empty_traces": self.empty_traces,
            "all_suppressed": self.all_suppressed,
        }


def check_guards(log: EventLog, config: TLKCConfig) -> None:
    """Reject inputs beyond exact-mode candidate enumeration bounds."""
    if config.L > MAX_L:
        raise GuardExceeded(f"L={config.L} exceeds the exact-mode bound {MAX_L}")
    activities = {e.activity for t in log.traces for e in t.events}
    if len(activities) > MAX_DISTINCT_ACTIVITIES:
        raise GuardExceeded(
            f"{len(activities)} distinct activities exceed the exact-mode bound {MAX_DISTINCT_ACTIVITIES}"
        )
    longest = max((len(t.events) for t in log.traces), default=0)
    if longest > MAX_TRACE_LENGTH:
        raise GuardExceeded(f"trace length {longest} exceeds the exact-mode bound {MAX_TRACE_LENGTH}")


def _epoch_ms(dt: datetime) -> int:
    return (dt.astimezone(timezone.utc) - _EPOCH) // timedelta(milliseconds=1)


def _bucket(dt: datetime, granularity: str) -> int:
    return _epoch_ms(dt) // GRANULARITY_MS[granularity]


def truncate_timestamp(dt: datetime, granularity: str) -> datetime:
    """Truncate downward to the start of the enclosing T bucket (UTC)."""
    unit = GRANULARITY_MS[granularity]
    return _EPOCH + timedelta(milliseconds=(_epoch_ms(dt) // unit) * unit)


def generalize_timestamps(log: EventLog, granularity: str) -> EventLog:
    """Truncate every event timestamp to its T bucket; order within
    traces is unchanged (truncation is monotone)."""
    if granularity not in GRANULARITY_MS:
        raise ParameterInvalid(f"unknown granularity {granularity!r}")
    traces = tuple(
        replace(
            trace,
            events=tuple(
                replace(e, timestamp=truncate_timestamp(e.timestamp, granularity)) for e in trace.events
            ),
        )
        for trace in log.traces
    )
    return replace(log, traces=traces)


def _offsets(trace: Trace, granularity: str) -> tuple[int, ...]:
    return tuple(_bucket(e.timestamp, granularity) for e in trace.events)


def match(candidate: Candidate, trace: Trace, granularity: str) -> bool:
    """Does the candidate's knowledge fit this trace?"""
    acts = trace.activities
    if candidate.background == "set":
        return set(candidate.items) <= set(acts)
    if candidate.background == "multiset":
        needed = Counter(candidate.items)
        have = Counter(acts)
        return all(have[a] >= n for a, n in needed.items())
    if candidate.background == "sequence":
        return _is_subsequence(candidate.items, acts)
    if candidate.background == "relative":
        return _matches_relative(candidate.items, acts, _offsets(trace, granularity))
    raise ParameterInvalid(f"unknown background type {candidate.background!r}")


def _is_subsequence(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    it = iter(haystack)
    return all(any(a == b for b in it) for a in needle)


def _matches_relative(
    items: tuple[tuple[str, int], ...],
    acts: tuple[str, ...],
    buckets: tuple[int, ...],
) -> bool:
    n = len(acts)

    def extend(pos: int, idx: int, anchor: int) -> bool:
        if idx == len(items):
            return True
        activity, offset = items[idx]
        for i in range(pos, n):
            if acts[i] == activity and buckets[i] - anchor == offset:
                if extend(i + 1, idx + 1, anchor):
                    return True
        return False

    first_activity, first_offset = items[0]
    if first_offset != 0:
        return False
    for i in range(n):
        if acts[i] == first_activity and extend(i + 1, 1, buckets[i]):
            return True
    return False


def _trace_candidates(trace: Trace, background: str, max_size: int, granularity: str) -> set[Candidate]:
    """All candidates of size <= max_size realizable in this trace."""
    acts = trace.activities
    found: set[Candidate] = set()
    if background == "set":
        distinct = sorted(set(acts))
        for r in range(1, min(max_size, len(distinct)) + 1):
            for combo in combinations(distinct, r):
                found.add(Candidate(background, combo))
        return found
    if background == "multiset":
        pool = sorted(acts)
        for r in range(1, min(max_size, len(pool)) + 1):
            for combo in set(combinations(pool, r)):
                found.add(Candidate(background, combo))
        return found
    if background == "sequence":
        for r in range(1, min(max_size, len(acts)) + 1):
            for positions in combinations(range(len(acts)), r):
                found.add(Candidate(background, tuple(acts[i] for i in positions)))
        return found
    if background == "relative":
        buckets = _offsets(trace, granularity)
        for r in range(1, min(max_size, len(acts)) + 1):
            for positions in combinations(range(len(acts)), r):
                anchor = buckets[positions[0]]
                items = tuple((acts[i], buckets[i] - anchor) for i in positions)
                found.add(Candidate(background, items))
        return found
    raise ParameterInvalid(f"unknown background type {background!r}")


def _sub_candidates(candidate: Candidate) -> set[Candidate]:
    """All proper sub-candidates (every smaller piece of the same
    knowledge, re-anchored for relative offsets)."""
    subs: set[Candidate] = set()
    items = candidate.items
    for r in range(1, len(items)):
        for positions in combinations(range(len(items)), r):
            picked = tuple(items[i] for i in positions)
            if candidate.background == "relative":
                anchor = picked[0][1]
                picked = tuple((a, o - anchor) for a, o in picked)
            elif candidate.background in ("set", "multiset"):
                picked = tuple(sorted(picked))
            subs.add(Candidate(candidate.background, picked))
    return subs


def _sensitive_value(trace: Trace, attribute: Optional[str]) -> Optional[str]:
    if attribute is None:
        return None
    value = trace.attributes.get(attribute)
    return None if value is None else str(value)


def find_minimal_violations(log: EventLog, config: TLKCConfig) -> ViolationReport:
    """Enumerate candidates realizable in the log and return the violating
    ones that have no violating proper sub-candidate.

    A candidate violates when its support falls below K or the confidence
    of some sensitive value among its matching traces exceeds C.
    """
    check_guards(log, config)
    support: Counter = Counter()
    value_counts: dict[Candidate, Counter] = {}
    for trace in log.traces:
        value = _sensitive_value(trace, config.sensitive_attribute)
        for candidate in _trace_candidates(trace, config.background, config.L, config.T):
            support[candidate] += 1
            if value is not None:
                value_counts.setdefault(candidate, Counter())[value] += 1

    c_bound = config.effective_c

    def confidence(candidate: Candidate) -> tuple[float, Optional[str]]:
        counts = value_counts.get(candidate)
        if not counts:
            return 0.0, None
        value, top = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
        return top / support[candidate], value

    violating: dict[Candidate, tuple[int, float, Optional[str]]] = {}
    for candidate, supp in support.items():
        conf, value = confidence(candidate)
        if 0 < supp < config.K or conf > c_bound:
            violating[candidate] = (supp, conf, value)

    minimal = []
    for candidate, (supp, conf, value) in violating.items():
        if any(sub in violating for sub in _sub_candidates(candidate)):
            continue
        minimal.append(ViolationEntry(candidate=candidate, support=supp, max_confidence=conf, sensitive_value=value))
    minimal.sort(key=lambda e: (e.candidate.size, e.candidate.items))
    return ViolationReport(minimal_violations=tuple(minimal))


def _suppress_activity(log: EventLog, activity: str) -> EventLog:
    """Remove every event with this activity; empty traces are kept so
    case counts and case attributes survive."""
    traces = tuple(
        replace(trace, events=tuple(e for e in trace.events if e.activity != activity))
        for trace in log.traces
    )
    return replace(log, traces=traces)


def apply_tlkc(
    log: EventLog,
    config: TLKCConfig,
    created_at: Optional[datetime] = None,
) -> tuple[EventLog, SuppressionReport]:
    """Generalize timestamps to T, then repeatedly suppress the activity
    with the highest violations-per-occurrence score until no minimal
    violation remains. Deterministic: ties break lexicographically."""
    if created_at is None:
        created_at = datetime.now(timezone.utc)
    check_guards(log, config)
    current = generalize_timestamps(log, config.T)
    initial_events = current.event_count

    suppressed: list[str] = []
    iterations: list[SuppressionIteration] = []
    while True:
        report = find_minimal_violations(current, config)
        if not report:
            break
        occurrences = Counter(e.activity for t in current.traces for e in t.events)
        hit_counts: Counter = Counter()
        for entry in report.minimal_violations:
            for activity in set(entry.candidate.activities()):
                hit_counts[activity] += 1
        scores = {a: hits / occurrences[a] for a, hits in hit_counts.items()}
        target = min(scores, key=lambda a: (-scores[a], a))
        iterations.append(SuppressionIteration(scores=scores, suppressed=target))
        suppressed.append(target)
        current = _suppress_activity(current, target)

    result = replace(
        current,
        metadata=append_op(log.metadata, "tlkc", config.parameters(), created_at),
    )
    remaining = result.event_count
    suppression = SuppressionReport(
        suppressed=tuple(suppressed),
        iterations=tuple(iterations),
        events_removed=initial_events - remaining,
        empty_traces=sum(1 for t in result.traces if not t.events),
        all_suppressed=initial_events > 0 and remaining == 0,
    )
    return result, suppression


def verify_tlkc(log: EventLog, config: TLKCConfig) -> bool:
    """Independent oracle: full enumeration with no minimality pruning,
    support computed by matching every candidate against every trace."""
    check_guards(log, config)
    candidates: set[Candidate] = set()
    for trace in log.traces:
        candidates |= _enumerate_for_verify(trace, config)
    c_bound = config.effective_c
    for candidate in candidates:
        matched = [t for t in log.traces if match(candidate, t, config.T)]
        supp = len(matched)
        if 0 < supp < config.K:
            return False
        if config.sensitive_attribute is not None and supp:
            counts = Counter(
                v for v in (_sensitive_value(t, config.sensitive_attribute) for t in matched) if v is not None
            )
            if counts and max(counts.values()) / supp > c_bound:
                return False
    return True


def _enumerate_for_verify(trace: Trace, config: TLKCConfig) -> set[Candidate]:
    """Position-subset enumeration used only by the verifier; kept apart
    from the candidate generator the violation finder uses."""
    acts = trace.activities
    buckets = _offsets(trace, config.T)
    found: set[Candidate] = set()
    for r in range(1, min(config.L, len(acts)) + 1):
        for positions in combinations(range(len(acts)), r):
            picked = [acts[i] for i in positions]
            if config.background == "set":
                if len(set(picked)) == len(picked):
                    found.add(Candidate("set", tuple(sorted(picked))))
            elif config.background == "multiset":
                found.add(Candidate("multiset", tuple(sorted(picked))))
            elif config.background == "sequence":
                found.add(Candidate("sequence", tuple(picked)))
            else:
                anchor = buckets[positions[0]]
                found.add(
                    Candidate("relative", tuple((acts[i], buckets[i] - anchor) for i in positions))
                )
    return found
