"""Connector method tests: key derivation, record construction, keyless
DFG discovery, keyed reconstruction, randomization."""

import random
from collections import Counter
from datetime import datetime, timezone

import pytest

from genlog import random_log, sequence_log
from ppdp.connector import (
    ZERO_NONCE,
    connectorize,
    derive_keys,
    dfg_without_key,
    pseudonym_dictionary,
    pseudonymize,
    reconstruct_with_key,
)
from ppdp.dfg import discover_dfg
from ppdp.ela import parse_ela, write_ela
from ppdp.errors import BrokenChain, DecryptionFailure, EmptyLog, EmptyPassphrase
from ppdp.model import END, START, EventLog

TS = datetime(2020, 1, 1, tzinfo=timezone.utc)
SALT = b"0123456789abcdef"


@pytest.fixture(scope="module")
def keys():
    return derive_keys("correct horse", SALT)


@pytest.fixture(scope="module")
def wrong_keys():
    return derive_keys("wrong horse", SALT)


def test_derive_keys_deterministic(keys):
    again = derive_keys("correct horse", SALT)
    assert again == keys
    assert keys.label_key != keys.connector_key


def test_derive_keys_salt_sensitivity(keys):
    other = derive_keys("correct horse", b"fedcba9876543210")
    assert other.label_key != keys.label_key
    assert other.connector_key != keys.connector_key


def test_empty_passphrase_rejected():
    with pytest.raises(EmptyPassphrase):
        derive_keys("")


def test_connectorize_record_count(keys):
    doc = connectorize(sequence_log([["a", "b"]]), keys, rng=random.Random(0), created_at=TS)
    assert len(doc.payload.records) == 3
    assert doc.method == "connector"
    assert doc.desired_analyses == ("directly-follows graph discovery",)
    assert [op.technique for op in doc.metadata.operations] == ["connector"]


def test_pseudonyms_deterministic_across_traces(keys):
    doc = connectorize(sequence_log([["a", "b"], ["c", "a"]]), keys, rng=random.Random(0), created_at=TS)
    p_a = pseudonymize(keys.label_key, "a")
    froms = Counter(r.from_pseudonym for r in doc.payload.records)
    tos = Counter(r.to_pseudonym for r in doc.payload.records)
    assert froms[p_a] == 2  # (a,b) and (a,end)
    assert tos[p_a] == 2  # (start,a) and (c,a)


def test_record_count_random_logs(keys):
    rng = random.Random(4)
    for seed in range(10):
        log = random_log(random.Random(seed), n_traces=rng.randint(1, 10))
        doc = connectorize(log, keys, rng=random.Random(seed), created_at=TS)
        assert len(doc.payload.records) == log.event_count + len(log.traces)


def test_empty_log_rejected(keys):
    with pytest.raises(EmptyLog):
        connectorize(EventLog(name="none"), keys)


def test_dfg_without_key_single_trace(keys):
    doc = connectorize(sequence_log([["a", "b"]]), keys, rng=random.Random(0), created_at=TS)
    dfg = dfg_without_key(doc)
    assert sorted(dfg.edges.values()) == [1, 1, 1]


def test_dfg_without_key_counts_duplicates(keys):
    doc = connectorize(sequence_log([["a", "b"], ["a", "b"]]), keys, rng=random.Random(0), created_at=TS)
    dfg = dfg_without_key(doc)
    assert dfg.frequency(pseudonymize(keys.label_key, "a"), pseudonymize(keys.label_key, "b")) == 2


def pseudonym_edges(log: EventLog, keys) -> dict:
    plain = discover_dfg(log)
    p = lambda a: pseudonymize(keys.label_key, a)
    return {(p(s), p(t)): f for (s, t), f in plain.edges.items()}


def test_dfg_isomorphic_under_prf_map(keys):
    for seed in range(10):
        log = random_log(random.Random(seed), n_traces=random.Random(seed).randint(1, 8))
        if not log.traces:
            continue
        doc = connectorize(log, keys, rng=random.Random(seed + 1), created_at=TS)
        assert dict(dfg_without_key(doc).edges) == pseudonym_edges(log, keys)


def test_reconstruct_roundtrip(keys):
    log = sequence_log([["a", "b"], ["a", "c"]])
    doc = connectorize(log, keys, rng=random.Random(2), created_at=TS)
    rebuilt = reconstruct_with_key(doc, keys, pseudonym_dictionary(keys, ["a", "b", "c"]))
    assert Counter(t.activities for t in rebuilt.traces) == Counter([("a", "b"), ("a", "c")])


def test_reconstruct_empty_trace(keys):
    doc = connectorize(sequence_log([[]]), keys, rng=random.Random(0), created_at=TS)
    assert len(doc.payload.records) == 1
    rebuilt = reconstruct_with_key(doc, keys, pseudonym_dictionary(keys, []))
    assert [t.activities for t in rebuilt.traces] == [()]


def test_reconstruct_random_multisets(keys):
    for seed in range(8):
        log = random_log(random.Random(seed), n_traces=6)
        doc = connectorize(log, keys, rng=random.Random(seed), created_at=TS)
        labels = pseudonym_dictionary(keys, {e.activity for t in log.traces for e in t.events})
        rebuilt = reconstruct_with_key(doc, keys, labels)
        assert Counter(t.activities for t in rebuilt.traces) == Counter(t.activities for t in log.traces)


def test_wrong_passphrase_fails_authentication(keys, wrong_keys):
    doc = connectorize(sequence_log([["a", "b"]]), keys, rng=random.Random(1), created_at=TS)
    with pytest.raises(DecryptionFailure):
        reconstruct_with_key(doc, wrong_keys, pseudonym_dictionary(wrong_keys, ["a", "b"]))


def test_tampered_document_breaks_chain(keys):
    log = sequence_log([["a", "b", "c"]])
    doc = connectorize(log, keys, rng=random.Random(3), created_at=TS)
    records = list(doc.payload.records)
    dropped = doc.payload.__class__(header=doc.payload.header, records=tuple(records[:-1]))
    broken = doc.__class__(
        origin=doc.origin,
        method=doc.method,
        desired_analyses=doc.desired_analyses,
        metadata=doc.metadata,
        payload=dropped,
    )
    with pytest.raises(BrokenChain):
        reconstruct_with_key(broken, keys, pseudonym_dictionary(keys, ["a", "b", "c"]))


def all_ciphertexts(doc) -> set:
    out = set()
    for r in doc.payload.records:
        out.add(r.prev_connector)
        out.add(r.next_connector)
    return out


def test_randomization_fresh_ciphertexts_same_edges(keys):
    log = sequence_log([["a", "b"], ["b", "a", "b"]])
    doc1 = connectorize(log, keys, rng=random.Random(10), created_at=TS)
    doc2 = connectorize(log, keys, rng=random.Random(11), created_at=TS)
    assert all_ciphertexts(doc1).isdisjoint(all_ciphertexts(doc2))
    assert dict(dfg_without_key(doc1).edges) == dict(dfg_without_key(doc2).edges)


def test_ciphertexts_unique_within_document(keys):
    log = sequence_log([["a"] * 5, ["a"] * 5])
    doc = connectorize(log, keys, rng=random.Random(6), created_at=TS)
    cts = [c for r in doc.payload.records for c in (r.prev_connector, r.next_connector)]
    assert len(cts) == len(set(cts))


def test_shuffle_decorrelates_positions(keys):
    # 20 one-event traces; over repeated runs the average shuffled position
    # of each trace's start record should not track emission order
    activities = [f"x{i:02d}" for i in range(20)]
    log = sequence_log([[a] for a in activities])
    p_start = pseudonymize(keys.label_key, START)
    mean_pos = [0.0] * len(activities)
    runs = 40
    for run in range(runs):
        doc = connectorize(log, keys, rng=random.Random(1000 + run), created_at=TS)
        for pos, record in enumerate(doc.payload.records):
            if record.from_pseudonym == p_start and record.to_pseudonym != pseudonymize(keys.label_key, END):
                idx = activities.index(
                    next(a for a in activities if pseudonymize(keys.label_key, a) == record.to_pseudonym)
                )
                mean_pos[idx] += pos / runs
    n = len(activities)
    xs = range(n)
    mean_x = (n - 1) / 2
    mean_y = sum(mean_pos) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, mean_pos))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in mean_pos)
    r = cov / (var_x * var_y) ** 0.5 if var_y else 0.0
    assert abs(r) < 0.35


def test_ela_roundtrip_preserves_document(keys):
    log = sequence_log([["a", "b"], ["c"]])
    doc = connectorize(log, keys, rng=random.Random(8), created_at=TS)
    assert parse_ela(write_ela(doc)) == doc


def test_zero_nonce_reserved():
    assert ZERO_NONCE == bytes(16)
