import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ppdp.model import Event, EventLog, Trace

TS = datetime(2020, 1, 1, 0, 0, 0, tzinfo=timezone.utc)


@pytest.fixture
def fixture_log() -> EventLog:
    """Two traces, five events, resources and a case attribute."""
    def ev(activity, minute, resource):
        return Event(activity=activity, timestamp=TS.replace(minute=minute), resource=resource)

    return EventLog(
        name="fixture",
        traces=(
            Trace(
                case_id="c1",
                events=(ev("register", 1, "alice"), ev("review", 2, "bob"), ev("close", 3, "alice")),
                attributes={"disease": "flu"},
            ),
            Trace(
                case_id="c2",
                events=(ev("register", 5, "alice"), ev("close", 9, "bob")),
                attributes={"disease": "cold"},
            ),
        ),
        global_attributes={"source": "unit-test"},
    )
