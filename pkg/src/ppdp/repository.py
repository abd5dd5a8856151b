"""Durable artifact repository plus technique application.

One directory holds a JSON index and a content file per artifact; every
mutation rewrites the index atomically (write-temp-then-rename), so a
process restart loses nothing. Entries are immutable snapshots: engines
read a parsed copy of the stored bytes, which is what makes concurrent
technique runs on the same input independent.
"""

from __future__ import annotations

import io
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional

from .dfg import DFG, discover_dfg
from .connector import dfg_without_key
from .ela import parse_ela
from .errors import (
    EngineError,
    HasDependents,
    NotFound,
    ParseError,
    UnparsableArtifact,
    WrongKind,
)
from .metadata import derive_output_name
from .model import StatisticsReport, log_statistics
from .techniques import get_technique, validate_parameters
from .xes import parse_xes

DATA_DIR_ENV = "PPDP_DATA_DIR"


@dataclass(frozen=True)
class ArtifactEntry:
    id: str
    name: str
    kind: str  # "xes" | "ela"
    created_at: datetime
    source_id: Optional[str]
    op_count: int
    byte_size: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "created_at": self.created_at.isoformat(),
            "source_id": self.source_id,
            "op_count": self.op_count,
            "byte_size": self.byte_size,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ArtifactEntry":
        return cls(
            id=raw["id"],
            name=raw["name"],
            kind=raw["kind"],
            created_at=datetime.fromisoformat(raw["created_at"]),
            source_id=raw.get("source_id"),
            op_count=raw["op_count"],
            byte_size=raw["byte_size"],
        )


@dataclass
class JobRecord:
    id: str
    artifact_in: str
    technique: str
    parameters: dict
    state: str = "running"  # running -> done | failed
    result: Optional[str] = None
    error: Optional[str] = None
    report: Optional[dict] = None
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "artifact_in": self.artifact_in,
            "technique": self.technique,
            "parameters": self.parameters,
            "state": self.state,
            "result": self.result,
            "error": self.error,
            "report": self.report,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "finished_at": self.finished_at.isoformat() if self.finished_at else None,
        }


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _new_id() -> str:
    return uuid.uuid4().hex[:12]


class Repository:
    """File-backed store of event data artifacts with provenance edges."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.objects = self.root / "objects"
        self.index_path = self.root / "index.json"
        self.objects.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: dict[str, ArtifactEntry] = {}
        self._order: list[str] = []
        self._jobs: dict[str, JobRecord] = {}
        self._load()

    def _load(self) -> None:
        if not self.index_path.exists():
            return
        raw = json.loads(self.index_path.read_text("utf-8"))
        for item in raw.get("artifacts", []):
            entry = ArtifactEntry.from_dict(item)
            self._entries[entry.id] = entry
            self._order.append(entry.id)

    def _save_locked(self) -> None:
        payload = {"artifacts": [self._entries[i].to_dict() for i in self._order]}
        _atomic_write(self.index_path, json.dumps(payload, indent=2).encode("utf-8"))

    # -- inspection ---------------------------------------------------------

    def list_artifacts(self) -> list[ArtifactEntry]:
        with self._lock:
            indexed = [(self._entries[i], pos) for pos, i in enumerate(self._order)]
        indexed.sort(key=lambda pair: (pair[0].created_at, pair[1]), reverse=True)
        return [entry for entry, _ in indexed]

    def get_artifact(self, artifact_id: str) -> ArtifactEntry:
        with self._lock:
            entry = self._entries.get(artifact_id)
        if entry is None:
            raise NotFound(f"no artifact with id {artifact_id!r}")
        return entry

    def read_bytes(self, artifact_id: str) -> bytes:
        entry = self.get_artifact(artifact_id)
        return (self.objects / entry.id).read_bytes()

    def download(self, artifact_id: str) -> tuple[bytes, str]:
        entry = self.get_artifact(artifact_id)
        return self.read_bytes(artifact_id), entry.name

    def statistics(self, artifact_id: str) -> Optional[StatisticsReport]:
        entry = self.get_artifact(artifact_id)
        if entry.kind != "xes":
            return None
        return log_statistics(parse_xes(self.read_bytes(artifact_id)))

    def operations(self, artifact_id: str) -> list[dict]:
        """Privacy operation chain of the stored artifact, oldest first."""
        entry = self.get_artifact(artifact_id)
        data = self.read_bytes(artifact_id)
        if entry.kind == "xes":
            metadata = parse_xes(io.BytesIO(data)).metadata
        else:
            metadata = parse_ela(data).metadata
        return [
            {
                "seq": op.seq,
                "technique": op.technique,
                "parameters": dict(op.parameters),
                "created_at": op.created_at.isoformat(),
            }
            for op in metadata.operations
        ]

    def get_job(self, job_id: str) -> JobRecord:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise NotFound(f"no job with id {job_id!r}")
        return job

    # -- mutation -----------------------------------------------------------

    def upload(self, data: bytes, filename: str) -> ArtifactEntry:
        """Store bytes after they parse as XES (plain or gzipped) or ELA."""
        diagnostics = []
        kind = None
        op_count = 0
        try:
            log = parse_xes(io.BytesIO(data), name=Path(filename).stem)
            kind, op_count = "xes", len(log.metadata)
        except ParseError as exc:
            diagnostics.append(f"xes: {exc}")
        if kind is None:
            try:
                doc = parse_ela(data)
                kind, op_count = "ela", len(doc.metadata)
            except ParseError as exc:
                diagnostics.append(f"ela: {exc}")
        if kind is None:
            raise UnparsableArtifact("; ".join(diagnostics))
        entry = ArtifactEntry(
            id=_new_id(),
            name=Path(filename).name or "upload.xes",
            kind=kind,
            created_at=datetime.now(timezone.utc),
            source_id=None,
            op_count=op_count,
            byte_size=len(data),
        )
        with self._lock:
            _atomic_write(self.objects / entry.id, data)
            self._entries[entry.id] = entry
            self._order.append(entry.id)
            self._save_locked()
        return entry

    def delete(self, artifact_id: str) -> None:
        """Remove entry and bytes unless the artifact is the provenance
        source of another entry."""
        with self._lock:
            if artifact_id not in self._entries:
                raise NotFound(f"no artifact with id {artifact_id!r}")
            dependents = [e.id for e in self._entries.values() if e.source_id == artifact_id]
            if dependents:
                raise HasDependents(
                    f"artifact {artifact_id} is the source of {len(dependents)} other artifact(s)"
                )
            del self._entries[artifact_id]
            self._order.remove(artifact_id)
            (self.objects / artifact_id).unlink(missing_ok=True)
            self._save_locked()

    def apply_technique(self, artifact_id: str, technique: str, parameters: Mapping[str, object]) -> JobRecord:
        """Run a technique on an immutable snapshot of the artifact.

        Validation failures raise before a job exists; engine failures are
        recorded on the returned JobRecord instead.
        """
        entry = self.get_artifact(artifact_id)
        if entry.kind != "xes":
            raise WrongKind(f"artifact {entry.name!r} is {entry.kind}; techniques accept only xes inputs")
        descriptor, engine = get_technique(technique)
        params = validate_parameters(descriptor, parameters)

        job = JobRecord(
            id=_new_id(),
            artifact_in=artifact_id,
            technique=technique,
            parameters={k: v for k, v in params.items()},
            started_at=datetime.now(timezone.utc),
        )
        with self._lock:
            self._jobs[job.id] = job

        data = self.read_bytes(artifact_id)
        created_at = datetime.now(timezone.utc)
        try:
            log = parse_xes(io.BytesIO(data), name=Path(entry.name).stem)
            result = engine(log, params, created_at)
        except (EngineError, ParseError) as exc:
            job.state = "failed"
            job.error = f"{type(exc).__name__}: {exc}"
            job.finished_at = datetime.now(timezone.utc)
            return job

        with self._lock:
            existing = {e.name for e in self._entries.values()}
            out_entry = ArtifactEntry(
                id=_new_id(),
                name=derive_output_name(technique, created_at, entry.name, existing=existing),
                kind=result.kind,
                created_at=created_at,
                source_id=entry.id,
                op_count=result.op_count,
                byte_size=len(result.data),
            )
            _atomic_write(self.objects / out_entry.id, result.data)
            self._entries[out_entry.id] = out_entry
            self._order.append(out_entry.id)
            self._save_locked()

        job.state = "done"
        job.result = out_entry.id
        job.report = result.report
        job.finished_at = datetime.now(timezone.utc)
        return job

    def preview_dfg(self, artifact_id: str) -> DFG:
        """DFG of an XES artifact, or the pseudonym DFG of a connector ELA."""
        entry = self.get_artifact(artifact_id)
        data = self.read_bytes(artifact_id)
        if entry.kind == "xes":
            return discover_dfg(parse_xes(io.BytesIO(data)))
        doc = parse_ela(data)
        if doc.method != "connector":
            raise WrongKind(f"no DFG preview for ELA method {doc.method!r}")
        return dfg_without_key(doc)
