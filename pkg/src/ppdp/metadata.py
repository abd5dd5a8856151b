"""Privacy metadata: the ordered, append-only record of anonymization
operations applied to an artifact, and the naming scheme for outputs."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping

from .errors import UnknownTechnique

# Registered technique names. "role-decomposition" and "tlkc" emit standard
# XES logs; "connector" emits an ELA document.
XES_TECHNIQUES = ("role-decomposition", "tlkc")
ELA_TECHNIQUES = ("connector",)
TECHNIQUES = XES_TECHNIQUES + ELA_TECHNIQUES


@dataclass(frozen=True)
class AnonymizationOp:
    """One applied technique: 1-based position, name, stringified
    parameters, and creation time."""

    seq: int
    technique: str
    parameters: Mapping[str, str] = field(default_factory=dict)
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


@dataclass(frozen=True)
class PrivacyMetadata:
    """Chain of operations ordered by seq; seq values are exactly 1..n."""

    operations: tuple[AnonymizationOp, ...] = ()

    def __post_init__(self):
        for i, op in enumerate(self.operations, start=1):
            if op.seq != i:
                raise ValueError(f"operation sequence numbers must be 1..n, got {op.seq} at position {i}")

    def __len__(self) -> int:
        return len(self.operations)

    def __bool__(self) -> bool:
        return bool(self.operations)


def append_op(
    metadata: PrivacyMetadata,
    technique: str,
    parameters: Mapping[str, object],
    created_at: datetime,
) -> PrivacyMetadata:
    """Return a new chain with one more operation; the input is unchanged."""
    if technique not in TECHNIQUES:
        raise UnknownTechnique(f"unknown technique {technique!r}")
    op = AnonymizationOp(
        seq=len(metadata.operations) + 1,
        technique=technique,
        parameters={k: str(v) for k, v in parameters.items()},
        created_at=created_at,
    )
    return PrivacyMetadata(operations=metadata.operations + (op,))


def _source_stem(source_name: str) -> str:
    stem = source_name
    for ext in (".gz", ".xes", ".ela"):
        if stem.lower().endswith(ext):
            stem = stem[: -len(ext)]
    return stem


def derive_output_name(
    technique: str,
    created_at: datetime,
    source_name: str,
    existing: Iterable[str] = (),
) -> str:
    """Build ``<technique>_<YYYYMMDDhhmmss>_<source stem>.<ext>``, suffixing
    ``_2``, ``_3``, ... until the name is unused in ``existing``."""
    if technique not in TECHNIQUES:
        raise UnknownTechnique(f"unknown technique {technique!r}")
    if not source_name:
        raise ValueError("source_name must be non-empty")
    ext = "ela" if technique in ELA_TECHNIQUES else "xes"
    stamp = created_at.astimezone(timezone.utc).strftime("%Y%m%d%H%M%S")
    base = f"{technique}_{stamp}_{_source_stem(source_name)}"
    taken = set(existing)
    name = f"{base}.{ext}"
    n = 2
    while name in taken:
        name = f"{base}_{n}.{ext}"
        n += 1
    return name
