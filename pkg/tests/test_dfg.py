"""DFG discovery and diff tests."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from genlog import random_log, sequence_log
from ppdp.dfg import (
    DFG,
    dfg_diff,
    dfg_from_json_dict,
    dfg_to_json_dict,
    discover_dfg,
)
from ppdp.model import END, START, EventLog


def brute_force_edges(sequences) -> dict:
    edges = {}
    for seq in sequences:
        path = [START] + list(seq) + [END]
        for a, b in zip(path, path[1:]):
            edges[(a, b)] = edges.get((a, b), 0) + 1
    return edges


def test_empty_log():
    assert discover_dfg(EventLog(name="e")).edges == {}


def test_single_pair():
    dfg = discover_dfg(sequence_log([["a", "b"]]))
    assert dict(dfg.edges) == {(START, "a"): 1, ("a", "b"): 1, ("b", END): 1}


def test_two_traces_worked_example():
    dfg = discover_dfg(sequence_log([["a", "b", "c"], ["a", "c"]]))
    assert dict(dfg.edges) == {
        (START, "a"): 2,
        ("a", "b"): 1,
        ("b", "c"): 1,
        ("a", "c"): 1,
        ("c", END): 2,
    }


def test_empty_trace_contributes_start_end_edge():
    dfg = discover_dfg(sequence_log([[], ["a"]]))
    assert dfg.frequency(START, END) == 1
    assert dfg.frequency(START, "a") == 1


def flows(dfg: DFG):
    inflow, outflow = {}, {}
    for (s, t), f in dfg.edges.items():
        outflow[s] = outflow.get(s, 0) + f
        inflow[t] = inflow.get(t, 0) + f
    return inflow, outflow


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_flow_conservation_and_trace_counts(seed):
    rng = random.Random(seed)
    log = random_log(rng, n_traces=rng.randint(0, 10))
    dfg = discover_dfg(log)
    inflow, outflow = flows(dfg)
    assert outflow.get(START, 0) == len(log.traces)
    assert inflow.get(END, 0) == len(log.traces)
    for node in dfg.nodes() - {START, END}:
        assert inflow.get(node, 0) == outflow.get(node, 0)


def test_invariant_under_trace_reordering():
    rng = random.Random(11)
    log = random_log(rng, n_traces=8)
    reordered = EventLog(name=log.name, traces=tuple(reversed(log.traces)))
    assert discover_dfg(log).edges == discover_dfg(reordered).edges


def test_matches_brute_force_oracle():
    rng = random.Random(3)
    log = random_log(rng, n_traces=12)
    expected = brute_force_edges([t.activities for t in log.traces])
    assert dict(discover_dfg(log).edges) == expected


def test_diff_identity():
    dfg = discover_dfg(sequence_log([["a", "b"]]))
    diff = dfg_diff(dfg, dfg)
    assert diff.is_identical
    assert diff.total_error == 0


def test_diff_single_edge_delta():
    ref = DFG(edges={("a", "b"): 2})
    cand = DFG(edges={("a", "b"): 1})
    diff = dfg_diff(ref, cand)
    assert diff.deltas[("a", "b")] == -1
    assert diff.total_error == 1
    assert diff.added == () and diff.removed == ()


def test_diff_membership_symmetry():
    ref = DFG(edges={("a", "b"): 1})
    cand = DFG(edges={("b", "c"): 1})
    diff = dfg_diff(ref, cand)
    assert diff.added == (("b", "c"),)
    assert diff.removed == (("a", "b"),)
    assert diff.total_error == 2


def test_diff_after_global_suppression_matches_recount():
    rng = random.Random(5)
    log = random_log(rng, n_traces=10)
    dropped = EventLog(
        name=log.name,
        traces=tuple(
            type(t)(case_id=t.case_id, events=tuple(e for e in t.events if e.activity != "a"), attributes=t.attributes)
            for t in log.traces
        ),
    )
    ref = discover_dfg(log)
    cand = discover_dfg(dropped)
    expected_ref = brute_force_edges([t.activities for t in log.traces])
    expected_cand = brute_force_edges([t.activities for t in dropped.traces])
    union = set(expected_ref) | set(expected_cand)
    expected_error = sum(abs(expected_ref.get(e, 0) - expected_cand.get(e, 0)) for e in union)
    assert dfg_diff(ref, cand).total_error == expected_error


def test_json_roundtrip_renders_glyphs():
    dfg = discover_dfg(sequence_log([["a"]]))
    payload = dfg_to_json_dict(dfg)
    froms = {edge["from"] for edge in payload["edges"]}
    assert "▶" in froms
    assert dfg_from_json_dict(payload).edges == dfg.edges
