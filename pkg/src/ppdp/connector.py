"""Connector method: publish directly-follows information under
encryption so that DFG discovery needs no key while trace reconstruction
does.

Every trace <a1..an> becomes n+1 records for the pairs
(start,a1), (a1,a2), ..., (an,end). Activity labels are replaced by
deterministic HMAC-SHA-256 pseudonyms (equal labels collide, so edge
frequencies stay countable). Consecutive records share a fresh random
128-bit nonce, carried only inside AES-256-GCM ciphertexts: record i's
next connector and record i+1's prev connector encrypt the same nonce,
and boundary connectors encrypt the reserved zero nonce. The record list
is shuffled before serialization.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import os
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Mapping, Optional

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

from .dfg import DFG
from .ela import CONNECTOR_METHOD, ConnectorPayload, ConnectorRecord, CryptoHeader, ELADocument
from .errors import BrokenChain, DecryptionFailure, EmptyLog, EmptyPassphrase, WrongMethod
from .metadata import append_op
from .model import END, START, Event, EventLog, Trace

KDF_NAME = "scrypt"
AEAD_NAME = "aes-256-gcm"
FORMAT_VERSION = "1.0"

SCRYPT_N = 2**15
SCRYPT_R = 8
SCRYPT_P = 1

SALT_BYTES = 16
PSEUDONYM_BYTES = 16
NONCE_BYTES = 16
GCM_IV_BYTES = 12

ZERO_NONCE = b"\x00" * NONCE_BYTES

CONNECTOR_ANALYSES = ("directly-follows graph discovery",)


@dataclass(frozen=True)
class ConnectorKeyset:
    """Label/connector keys derived from one passphrase, plus the salt
    that reproduces them."""

    label_key: bytes
    connector_key: bytes
    kdf_salt: bytes


def derive_keys(passphrase: str, salt: Optional[bytes] = None) -> ConnectorKeyset:
    """Derive the keyset from a passphrase via scrypt; the 64-byte output
    is split so the label and connector keys never coincide."""
    if not passphrase:
        raise EmptyPassphrase("passphrase must be non-empty")
    if salt is None:
        salt = os.urandom(SALT_BYTES)
    if len(salt) != SALT_BYTES:
        raise ValueError(f"salt must be {SALT_BYTES} bytes")
    kdf = Scrypt(salt=salt, length=64, n=SCRYPT_N, r=SCRYPT_R, p=SCRYPT_P)
    master = kdf.derive(passphrase.encode("utf-8"))
    return ConnectorKeyset(label_key=master[:32], connector_key=master[32:], kdf_salt=salt)


def pseudonymize(label_key: bytes, activity: str) -> str:
    """Deterministic 16-byte pseudonym of an activity label, hex-encoded."""
    digest = hmac.new(label_key, activity.encode("utf-8"), hashlib.sha256).digest()
    return digest[:PSEUDONYM_BYTES].hex()


def pseudonym_dictionary(keys: ConnectorKeyset, activities: Iterable[str]) -> dict[str, str]:
    """Pseudonym -> label map a key holder rebuilds from candidate labels;
    the artificial start/end labels are always included."""
    labels = set(activities) | {START, END}
    return {pseudonymize(keys.label_key, label): label for label in labels}


def _encrypt_connector(key: bytes, nonce: bytes, rng: random.Random) -> str:
    iv = rng.randbytes(GCM_IV_BYTES)
    ciphertext = AESGCM(key).encrypt(iv, nonce, None)
    return base64.b64encode(iv + ciphertext).decode("ascii")


def _decrypt_connector(key: bytes, token: str) -> bytes:
    try:
        blob = base64.b64decode(token, validate=True)
    except Exception as exc:
        raise BrokenChain(f"connector is not valid base64: {exc}") from exc
    if len(blob) <= GCM_IV_BYTES:
        raise BrokenChain("connector ciphertext is too short")
    try:
        nonce = AESGCM(key).decrypt(blob[:GCM_IV_BYTES], blob[GCM_IV_BYTES:], None)
    except InvalidTag as exc:
        raise DecryptionFailure("connector does not authenticate under this key") from exc
    if len(nonce) != NONCE_BYTES:
        raise BrokenChain("decrypted connector has the wrong length")
    return nonce


def connectorize(
    log: EventLog,
    keys: ConnectorKeyset,
    rng: Optional[random.Random] = None,
    created_at: Optional[datetime] = None,
) -> ELADocument:
    """Break the log into encrypted directly-follows records inside an
    ELA document.

    ``rng`` drives IV generation and the record shuffle; it defaults to a
    fresh SystemRandom, and injecting a seeded generator makes the output
    reproducible for tests.
    """
    if not log.traces:
        raise EmptyLog("cannot connectorize a log without traces")
    if rng is None:
        rng = random.SystemRandom()
    if created_at is None:
        created_at = datetime.now(timezone.utc)

    key = keys.connector_key
    records: list[ConnectorRecord] = []
    for trace in log.traces:
        labels = (START,) + trace.activities + (END,)
        link_nonces = [rng.randbytes(NONCE_BYTES) for _ in range(len(labels) - 2)]
        nonces = [ZERO_NONCE] + link_nonces + [ZERO_NONCE]
        for i in range(len(labels) - 1):
            records.append(
                ConnectorRecord(
                    from_pseudonym=pseudonymize(keys.label_key, labels[i]),
                    to_pseudonym=pseudonymize(keys.label_key, labels[i + 1]),
                    prev_connector=_encrypt_connector(key, nonces[i], rng),
                    next_connector=_encrypt_connector(key, nonces[i + 1], rng),
                )
            )
    rng.shuffle(records)

    header = CryptoHeader(
        kdf_name=KDF_NAME,
        kdf_salt=keys.kdf_salt,
        aead_name=AEAD_NAME,
        version=FORMAT_VERSION,
    )
    return ELADocument(
        origin=log.name,
        method=CONNECTOR_METHOD,
        desired_analyses=CONNECTOR_ANALYSES,
        metadata=append_op(
            log.metadata,
            "connector",
            {"kdf": KDF_NAME, "aead": AEAD_NAME},
            created_at,
        ),
        payload=ConnectorPayload(header=header, records=tuple(records)),
    )


def dfg_without_key(doc: ELADocument) -> DFG:
    """Pseudonym-labeled DFG read straight off the records; needs no key."""
    if doc.method != CONNECTOR_METHOD:
        raise WrongMethod(f"expected a connector document, got method {doc.method!r}")
    payload: ConnectorPayload = doc.payload
    edges: dict[tuple[str, str], int] = {}
    for record in payload.records:
        edge = (record.from_pseudonym, record.to_pseudonym)
        edges[edge] = edges.get(edge, 0) + 1
    return DFG(edges=edges)


def reconstruct_with_key(
    doc: ELADocument,
    keys: ConnectorKeyset,
    label_dictionary: Mapping[str, str],
) -> EventLog:
    """Rebuild the multiset of activity sequences by chaining records on
    equal decrypted nonces.

    Timestamps do not survive the connector method, so reconstructed
    events carry synthetic epoch instants that only preserve order.
    """
    if doc.method != CONNECTOR_METHOD:
        raise WrongMethod(f"expected a connector document, got method {doc.method!r}")
    payload: ConnectorPayload = doc.payload
    key = keys.connector_key

    decrypted = [
        (record, _decrypt_connector(key, record.prev_connector), _decrypt_connector(key, record.next_connector))
        for record in payload.records
    ]
    by_prev: dict[bytes, tuple[ConnectorRecord, bytes]] = {}
    heads = []
    for record, prev_nonce, next_nonce in decrypted:
        if prev_nonce == ZERO_NONCE:
            heads.append((record, next_nonce))
        elif prev_nonce in by_prev:
            raise BrokenChain("two records share one chaining nonce")
        else:
            by_prev[prev_nonce] = (record, next_nonce)

    def label(pseudonym: str) -> str:
        if pseudonym not in label_dictionary:
            raise BrokenChain(f"pseudonym {pseudonym} is not covered by the label dictionary")
        return label_dictionary[pseudonym]

    epoch = datetime(1970, 1, 1, tzinfo=timezone.utc)
    traces = []
    consumed = 0
    for record, next_nonce in heads:
        activities = []
        consumed += 1
        while next_nonce != ZERO_NONCE:
            activities.append(label(record.to_pseudonym))
            if next_nonce not in by_prev:
                raise BrokenChain("chain ends without a terminating record")
            record, next_nonce = by_prev.pop(next_nonce)
            consumed += 1
        if label(record.to_pseudonym) != END:
            raise BrokenChain("chain does not terminate at the end node")
        traces.append(tuple(activities))
    if consumed != len(payload.records):
        raise BrokenChain("document contains records that belong to no chain")

    return EventLog(
        name=doc.origin,
        traces=tuple(
            Trace(
                case_id=f"case_{i}",
                events=tuple(Event(activity=a, timestamp=epoch) for a in activities),
            )
            for i, activities in enumerate(traces, start=1)
        ),
        metadata=doc.metadata,
    )
