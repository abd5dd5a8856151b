"""TLKC tests: generalization, matching, violation mining, suppression,
and the independent verification oracle."""

import random
from collections import Counter
from datetime import datetime, timedelta, timezone
from itertools import combinations

import pytest

from genlog import random_log, sequence_log
from ppdp.errors import GuardExceeded, ParameterInvalid
from ppdp.model import Event, EventLog, Trace
from ppdp.tlkc import (
    Candidate,
    TLKCConfig,
    apply_tlkc,
    find_minimal_violations,
    generalize_timestamps,
    match,
    truncate_timestamp,
    verify_tlkc,
)

TS = datetime(2020, 7, 1, 12, 34, 56, 789000, tzinfo=timezone.utc)
EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

UNIT_MS = {
    "milliseconds": 1,
    "seconds": 1_000,
    "minutes": 60_000,
    "hours": 3_600_000,
    "days": 86_400_000,
}


def bucket_of(dt, granularity):
    ms = (dt - EPOCH) // timedelta(milliseconds=1)
    return ms // UNIT_MS[granularity]


def oracle_match(candidate: Candidate, trace: Trace, granularity: str) -> bool:
    """Exhaustive position-subset matcher, independent of ppdp.tlkc.match."""
    acts = trace.activities
    buckets = [bucket_of(e.timestamp, granularity) for e in trace.events]
    size = candidate.size
    for positions in combinations(range(len(acts)), size):
        sel = [acts[i] for i in positions]
        if candidate.background == "set":
            if len(set(sel)) == size and tuple(sorted(set(sel))) == tuple(sorted(candidate.items)):
                return True
        elif candidate.background == "multiset":
            if tuple(sorted(sel)) == tuple(sorted(candidate.items)):
                return True
        elif candidate.background == "sequence":
            if tuple(sel) == candidate.items:
                return True
        else:
            anchor = buckets[positions[0]]
            got = tuple((acts[i], buckets[i] - anchor) for i in positions)
            if got == candidate.items:
                return True
    return False


# ---------------------------------------------------------------------------
# timestamp generalization

def test_truncate_to_hours():
    assert truncate_timestamp(TS, "hours") == datetime(2020, 7, 1, 12, 0, 0, tzinfo=timezone.utc)


def test_milliseconds_is_identity():
    log = sequence_log([["a", "b"]])
    assert generalize_timestamps(log, "milliseconds") == log


def test_days_collapses_same_day_offsets():
    events = (
        Event("a", datetime(2020, 7, 1, 3, 0, tzinfo=timezone.utc)),
        Event("b", datetime(2020, 7, 1, 22, 0, tzinfo=timezone.utc)),
    )
    log = EventLog(name="d", traces=(Trace(case_id="c", events=events),))
    out = generalize_timestamps(log, "days")
    stamps = [e.timestamp for e in out.traces[0].events]
    assert stamps[0] == stamps[1] == datetime(2020, 7, 1, tzinfo=timezone.utc)
    assert out.traces[0].activities == ("a", "b")


def test_generalization_keeps_event_order():
    rng = random.Random(1)
    log = random_log(rng, n_traces=5)
    out = generalize_timestamps(log, "days")
    for before, after in zip(log.traces, out.traces):
        assert before.activities == after.activities


# ---------------------------------------------------------------------------
# matching

def test_match_set_vs_sequence_worked_example():
    trace = sequence_log([["b", "x", "a"]]).traces[0]
    assert match(Candidate("set", ("a", "b")), trace, "hours")
    assert not match(Candidate("sequence", ("a", "b")), trace, "hours")


def test_match_multiset_worked_example():
    yes = sequence_log([["a", "b", "a"]]).traces[0]
    no = sequence_log([["a", "b"]]).traces[0]
    assert match(Candidate("multiset", ("a", "a")), yes, "hours")
    assert not match(Candidate("multiset", ("a", "a")), no, "hours")


def test_empty_candidate_disallowed():
    with pytest.raises(ParameterInvalid):
        Candidate("set", ())


def test_match_relative_uses_truncated_offsets():
    events = (
        Event("a", datetime(2020, 7, 1, 12, 5, tzinfo=timezone.utc)),
        Event("b", datetime(2020, 7, 1, 12, 50, tzinfo=timezone.utc)),
        Event("c", datetime(2020, 7, 1, 14, 10, tzinfo=timezone.utc)),
    )
    trace = Trace(case_id="c", events=events)
    assert match(Candidate("relative", (("a", 0), ("c", 2))), trace, "hours")
    assert match(Candidate("relative", (("a", 0), ("b", 0))), trace, "hours")
    assert not match(Candidate("relative", (("a", 0), ("b", 1))), trace, "hours")


def test_match_agrees_with_bruteforce_oracle():
    rng = random.Random(7)
    for seed in range(15):
        log = random_log(random.Random(seed), n_traces=4, max_events=6, alphabet=("a", "b", "c"))
        traces = [t for t in log.traces if t.events]
        if not traces:
            continue
        source = traces[0]
        for background in ("set", "multiset", "sequence", "relative"):
            for _ in range(6):
                size = rng.randint(1, min(3, len(source.events)))
                positions = sorted(rng.sample(range(len(source.events)), size))
                acts = [source.activities[i] for i in positions]
                if background == "set":
                    if len(set(acts)) != len(acts):
                        continue
                    items = tuple(sorted(set(acts)))
                elif background == "multiset":
                    items = tuple(sorted(acts))
                elif background == "sequence":
                    items = tuple(acts)
                else:
                    buckets = [bucket_of(source.events[i].timestamp, "hours") for i in positions]
                    items = tuple((a, b - buckets[0]) for a, b in zip(acts, buckets))
                candidate = Candidate(background, items)
                for trace in log.traces:
                    assert match(candidate, trace, "hours") == oracle_match(candidate, trace, "hours")


def test_support_monotonicity_across_backgrounds():
    rng = random.Random(13)
    for seed in range(10):
        log = random_log(random.Random(seed), n_traces=6, max_events=6, alphabet=("a", "b", "c"))
        traces = [t for t in log.traces if t.events]
        if not traces:
            continue
        source = rng.choice(traces)
        size = rng.randint(1, min(3, len(source.events)))
        positions = sorted(rng.sample(range(len(source.events)), size))
        seq = tuple(source.activities[i] for i in positions)
        seq_c = Candidate("sequence", seq)
        multi_c = Candidate("multiset", tuple(sorted(seq)))
        set_c = Candidate("set", tuple(sorted(set(seq))))
        supp = lambda c: sum(1 for t in log.traces if match(c, t, "hours"))
        assert supp(seq_c) <= supp(multi_c) <= supp(set_c)


# ---------------------------------------------------------------------------
# minimal violations

def test_minimal_violation_worked_example():
    log = sequence_log([["a", "b"], ["a", "b"], ["a", "c"]])
    config = TLKCConfig(T="hours", L=2, K=2, C=1.0, background="sequence")
    report = find_minimal_violations(log, config)
    assert [e.candidate.items for e in report.minimal_violations] == [("c",)]
    assert report.minimal_violations[0].support == 1


def test_set_vs_sequence_violations():
    log = sequence_log([["a", "b"], ["b", "a"]])
    set_report = find_minimal_violations(log, TLKCConfig(T="hours", L=2, K=2, background="set"))
    assert set_report.minimal_violations == ()
    seq_report = find_minimal_violations(log, TLKCConfig(T="hours", L=2, K=2, background="sequence"))
    violating = {e.candidate.items for e in seq_report.minimal_violations}
    assert violating == {("a", "b"), ("b", "a")}
    assert all(e.support == 1 for e in seq_report.minimal_violations)


def test_confidence_violation():
    log = sequence_log([["a"]] * 5, sensitive=["X", "X", "X", "Y", "Y"])
    config = TLKCConfig(T="hours", L=1, K=2, C=0.4, background="sequence", sensitive_attribute="disease")
    report = find_minimal_violations(log, config)
    assert len(report.minimal_violations) == 1
    entry = report.minimal_violations[0]
    assert entry.candidate.items == ("a",)
    assert entry.support == 5
    assert entry.max_confidence == pytest.approx(0.6)
    assert entry.sensitive_value == "X"


def test_confidence_ignored_without_sensitive_attribute():
    log = sequence_log([["a"]] * 5, sensitive=["X", "X", "X", "Y", "Y"])
    config = TLKCConfig(T="hours", L=1, K=2, C=0.4, background="sequence", sensitive_attribute=None)
    assert find_minimal_violations(log, config).minimal_violations == ()


def test_traces_missing_sensitive_value_count_toward_support_only():
    traces = list(sequence_log([["a"], ["a"]], sensitive=["X", "X"]).traces)
    traces.append(Trace(case_id="case_3", events=sequence_log([["a"]]).traces[0].events))
    log = EventLog(name="m", traces=tuple(traces))
    config = TLKCConfig(T="hours", L=1, K=1, C=0.6, background="sequence", sensitive_attribute="disease")
    report = find_minimal_violations(log, config)
    assert len(report.minimal_violations) == 1
    assert report.minimal_violations[0].max_confidence == pytest.approx(2 / 3)


def proper_subs(candidate: Candidate):
    for r in range(1, candidate.size):
        for positions in combinations(range(candidate.size), r):
            picked = tuple(candidate.items[i] for i in positions)
            if candidate.background == "relative":
                anchor = picked[0][1]
                picked = tuple((a, o - anchor) for a, o in picked)
            elif candidate.background in ("set", "multiset"):
                picked = tuple(sorted(picked))
            yield Candidate(candidate.background, picked)


def test_minimality_no_listed_candidate_has_violating_sub():
    for seed in range(6):
        log = random_log(random.Random(seed), n_traces=5, max_events=5, alphabet=("a", "b", "c"))
        for background in ("set", "multiset", "sequence", "relative"):
            config = TLKCConfig(T="hours", L=3, K=2, background=background)
            report = find_minimal_violations(log, config)
            for entry in report.minimal_violations:
                supp = sum(1 for t in log.traces if oracle_match(entry.candidate, t, "hours"))
                assert supp == entry.support
                assert 0 < supp < config.K or entry.max_confidence > config.effective_c
                for sub in proper_subs(entry.candidate):
                    sub_supp = sum(1 for t in log.traces if oracle_match(sub, t, "hours"))
                    assert not (0 < sub_supp < config.K), (entry.candidate, sub)


def test_guards():
    log = sequence_log([["a"]])
    with pytest.raises(GuardExceeded):
        find_minimal_violations(log, TLKCConfig(T="hours", L=5, K=2))
    wide = sequence_log([[f"act{i}" for i in range(21)]])
    with pytest.raises(GuardExceeded):
        find_minimal_violations(wide, TLKCConfig(T="hours", L=1, K=2))
    long = sequence_log([["a"] * 26])
    with pytest.raises(GuardExceeded):
        find_minimal_violations(long, TLKCConfig(T="hours", L=1, K=2))


# ---------------------------------------------------------------------------
# apply + verify

def test_apply_worked_example():
    log = sequence_log([["a", "b"], ["a", "b"], ["a", "c"]])
    config = TLKCConfig(T="hours", L=2, K=2, C=1.0, background="sequence")
    result, report = apply_tlkc(log, config, created_at=TS)
    assert report.suppressed == ("c",)
    assert [t.activities for t in result.traces] == [("a", "b"), ("a", "b"), ("a",)]
    assert verify_tlkc(result, config)
    assert not verify_tlkc(generalize_timestamps(log, "hours"), config)


def test_apply_identity_when_all_traces_equal():
    log = sequence_log([["a", "b", "c"]] * 5)
    for background in ("set", "multiset", "sequence", "relative"):
        config = TLKCConfig(T="milliseconds", L=3, K=5, background=background)
        result, report = apply_tlkc(log, config, created_at=TS)
        assert report.suppressed == ()
        assert result.traces == log.traces


def test_apply_confidence_example_suppresses_everything():
    log = sequence_log([["a"]] * 5, sensitive=["X", "X", "X", "Y", "Y"])
    config = TLKCConfig(T="hours", L=1, K=2, C=0.4, background="sequence", sensitive_attribute="disease")
    result, report = apply_tlkc(log, config, created_at=TS)
    assert report.suppressed == ("a",)
    assert report.all_suppressed
    assert report.empty_traces == 5
    assert all(not t.events for t in result.traces)
    assert len(result.traces) == 5  # empty traces retained, attributes survive
    assert result.traces[0].attributes == {"disease": "X"}
    assert verify_tlkc(result, config)


def test_apply_appends_metadata_op():
    log = sequence_log([["a", "b"]] * 3)
    config = TLKCConfig(T="minutes", L=2, K=2, background="multiset")
    result, _ = apply_tlkc(log, config, created_at=TS)
    op = result.metadata.operations[0]
    assert op.technique == "tlkc"
    assert op.parameters["T"] == "minutes"
    assert op.parameters["background"] == "multiset"


def test_suppression_only_removes_events():
    rng = random.Random(5)
    log = random_log(rng, n_traces=8, max_events=6, alphabet=("a", "b", "c", "d"))
    config = TLKCConfig(T="hours", L=2, K=3, background="sequence")
    result, report = apply_tlkc(log, config, created_at=TS)
    gone = set(report.suppressed)
    generalized = generalize_timestamps(log, "hours")
    for before, after in zip(generalized.traces, result.traces):
        survivors = [e for e in before.events if e.activity not in gone]
        assert list(after.events) == survivors


def test_termination_bound():
    rng = random.Random(9)
    log = random_log(rng, n_traces=6, max_events=6, alphabet=("a", "b", "c", "d", "e"))
    config = TLKCConfig(T="hours", L=3, K=4, background="sequence")
    _, report = apply_tlkc(log, config, created_at=TS)
    distinct = len({e.activity for t in log.traces for e in t.events})
    assert len(report.suppressed) <= distinct
    assert len(set(report.suppressed)) == len(report.suppressed)


def test_apply_deterministic():
    rng = random.Random(21)
    log = random_log(rng, n_traces=7, max_events=5, sensitive_key="disease")
    config = TLKCConfig(T="hours", L=2, K=3, C=0.6, background="multiset", sensitive_attribute="disease")
    first = apply_tlkc(log, config, created_at=TS)
    second = apply_tlkc(log, config, created_at=TS)
    assert first[0] == second[0]
    assert first[1] == second[1]


def test_verify_empty_log():
    assert verify_tlkc(EventLog(name="e"), TLKCConfig())


def test_soundness_property_all_backgrounds():
    cases = 0
    for seed in range(24):
        rng = random.Random(seed)
        log = random_log(
            rng,
            n_traces=rng.randint(2, 8),
            max_events=6,
            alphabet=("a", "b", "c", "d"),
            sensitive_key="disease" if seed % 2 else None,
        )
        background = ("set", "multiset", "sequence", "relative")[seed % 4]
        config = TLKCConfig(
            T=("hours", "days", "minutes")[seed % 3],
            L=1 + seed % 3,
            K=2 + seed % 2,
            C=0.4 if seed % 2 else 1.0,
            background=background,
            sensitive_attribute="disease" if seed % 2 else None,
        )
        result, _ = apply_tlkc(log, config, created_at=TS)
        assert verify_tlkc(result, config), f"seed {seed} {background}"
        cases += 1
    assert cases == 24


def naive_verify(log: EventLog, config: TLKCConfig) -> bool:
    """Test-local third implementation using the exhaustive oracle."""
    candidates = set()
    for trace in log.traces:
        acts = trace.activities
        buckets = [bucket_of(e.timestamp, config.T) for e in trace.events]
        for r in range(1, min(config.L, len(acts)) + 1):
            for positions in combinations(range(len(acts)), r):
                sel = [acts[i] for i in positions]
                if config.background == "set":
                    if len(set(sel)) == r:
                        candidates.add(Candidate("set", tuple(sorted(sel))))
                elif config.background == "multiset":
                    candidates.add(Candidate("multiset", tuple(sorted(sel))))
                elif config.background == "sequence":
                    candidates.add(Candidate("sequence", tuple(sel)))
                else:
                    anchor = buckets[positions[0]]
                    candidates.add(
                        Candidate("relative", tuple((acts[i], buckets[i] - anchor) for i in positions))
                    )
    for candidate in candidates:
        matched = [t for t in log.traces if oracle_match(candidate, t, config.T)]
        if 0 < len(matched) < config.K:
            return False
        if config.sensitive_attribute and matched:
            values = Counter(
                str(t.attributes[config.sensitive_attribute])
                for t in matched
                if config.sensitive_attribute in t.attributes
            )
            if values and max(values.values()) / len(matched) > config.effective_c:
                return False
    return True


def test_verify_cross_checked_against_naive():
    for seed in range(12):
        rng = random.Random(seed)
        log = random_log(
            rng,
            n_traces=rng.randint(1, 6),
            max_events=5,
            alphabet=("a", "b", "c"),
            sensitive_key="disease",
        )
        for background in ("set", "multiset", "sequence", "relative"):
            config = TLKCConfig(
                T="hours",
                L=2,
                K=2,
                C=0.5,
                background=background,
                sensitive_attribute="disease",
            )
            assert verify_tlkc(log, config) == naive_verify(log, config), f"seed {seed} {background}"


def test_config_validation():
    with pytest.raises(ParameterInvalid):
        TLKCConfig(T="weeks")
    with pytest.raises(ParameterInvalid):
        TLKCConfig(L=0)
    with pytest.raises(ParameterInvalid):
        TLKCConfig(K=0)
    with pytest.raises(ParameterInvalid):
        TLKCConfig(C=1.5)
    with pytest.raises(ParameterInvalid):
        TLKCConfig(background="sets")
