"""In-memory event log model: logs, traces, events, attribute values.

Values are immutable after construction and safe to share between
concurrently running techniques. The four main process-mining attributes
(case id, activity, timestamp, resource) are first-class fields; everything
else travels in ``extras``/``attributes`` maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Optional, Union

from .errors import InvalidLog
from .metadata import PrivacyMetadata

# Attribute values keep the tag of the XES element they were read from:
# str <-> string, int <-> int, float <-> float, bool <-> boolean,
# datetime <-> date.
AttributeValue = Union[str, int, float, bool, datetime]

# Reserved node names used by the DFG miner for the artificial start/end
# nodes; real activities must never carry them.
START = "__START__"
END = "__END__"
RESERVED_ACTIVITY_NAMES = frozenset({START, END})


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp and normalize it to UTC milliseconds."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return to_utc_millis(dt)


def to_utc_millis(dt: datetime) -> datetime:
    """Convert to UTC and truncate sub-millisecond digits."""
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=(dt.microsecond // 1000) * 1000)


def format_timestamp(dt: datetime) -> str:
    """Render a UTC instant as ISO-8601 with millisecond precision."""
    dt = to_utc_millis(dt)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}" + "+00:00"


@dataclass(frozen=True)
class Event:
    """One event: required activity and timestamp, optional resource."""

    activity: str
    timestamp: datetime
    resource: Optional[str] = None
    extras: Mapping[str, AttributeValue] = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity:
            raise InvalidLog("event activity must be non-empty")
        if self.activity in RESERVED_ACTIVITY_NAMES:
            raise InvalidLog(f"activity name {self.activity!r} is reserved")
        if self.timestamp.tzinfo is None:
            raise InvalidLog("event timestamp must be timezone-aware")


@dataclass(frozen=True)
class Trace:
    """One case: a non-empty id and its timestamp-ordered events."""

    case_id: str
    events: tuple[Event, ...] = ()
    attributes: Mapping[str, AttributeValue] = field(default_factory=dict)

    def __post_init__(self):
        if not self.case_id:
            raise InvalidLog("trace case_id must be non-empty")

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    """A named collection of traces plus log-level attributes and the
    chain of privacy operations already applied to it."""

    name: str
    traces: tuple[Trace, ...] = ()
    global_attributes: Mapping[str, AttributeValue] = field(default_factory=dict)
    metadata: PrivacyMetadata = field(default_factory=PrivacyMetadata)

    def __post_init__(self):
        seen = set()
        for trace in self.traces:
            if trace.case_id in seen:
                raise InvalidLog(f"duplicate case id {trace.case_id!r}")
            seen.add(trace.case_id)

    def __len__(self) -> int:
        return len(self.traces)

    @property
    def event_count(self) -> int:
        return sum(len(t.events) for t in self.traces)


def sort_events(events: tuple[Event, ...]) -> tuple[Event, ...]:
    """Order events by timestamp, keeping document order for ties."""
    return tuple(sorted(events, key=lambda e: e.timestamp))


@dataclass(frozen=True)
class StatisticsReport:
    case_count: int
    event_count: int
    distinct_activities: int
    distinct_resources: int
    first_timestamp: Optional[datetime]
    last_timestamp: Optional[datetime]

    def to_dict(self) -> dict:
        return {
            "case_count": self.case_count,
            "event_count": self.event_count,
            "distinct_activities": self.distinct_activities,
            "distinct_resources": self.distinct_resources,
            "first_timestamp": format_timestamp(self.first_timestamp) if self.first_timestamp else None,
            "last_timestamp": format_timestamp(self.last_timestamp) if self.last_timestamp else None,
        }


def log_statistics(log: EventLog) -> StatisticsReport:
    """Exact counts over the four main attributes plus the timestamp span."""
    activities = set()
    resources = set()
    timestamps = []
    events = 0
    for trace in log.traces:
        for event in trace.events:
            events += 1
            activities.add(event.activity)
            if event.resource is not None:
                resources.add(event.resource)
            timestamps.append(event.timestamp)
    return StatisticsReport(
        case_count=len(log.traces),
        event_count=events,
        distinct_activities=len(activities),
        distinct_resources=len(resources),
        first_timestamp=min(timestamps) if timestamps else None,
        last_timestamp=max(timestamps) if timestamps else None,
    )
