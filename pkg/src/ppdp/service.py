"""HTTP API over the artifact repository, consumed by the web console.

All responses are JSON except downloads. Toolkit errors map onto the
documented status codes: 400 ParameterInvalid/UnknownTechnique,
404 NotFound, 409 WrongKind/HasDependents, 422 UnparsableArtifact.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, File, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .dfg import dfg_to_json_dict
from .errors import (
    HasDependents,
    NotFound,
    ParameterInvalid,
    PpdpError,
    UnknownTechnique,
    UnparsableArtifact,
    WrongKind,
)
from .repository import Repository
from .techniques import list_techniques

_STATUS = (
    (NotFound, 404),
    (HasDependents, 409),
    (WrongKind, 409),
    (UnparsableArtifact, 422),
    (ParameterInvalid, 400),
    (UnknownTechnique, 400),
)


def _status_for(exc: PpdpError) -> int:
    for exc_type, status in _STATUS:
        if isinstance(exc, exc_type):
            return status
    return 400


def create_app(repository: Repository, static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="ppdp", version="0.1.0")

    @app.exception_handler(PpdpError)
    async def _ppdp_error(request: Request, exc: PpdpError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/api/techniques")
    def techniques():
        return [d.to_dict() for d in list_techniques()]

    @app.post("/api/logs", status_code=201)
    def upload(file: UploadFile = File(...)):
        data = file.file.read()
        entry = repository.upload(data, file.filename or "upload.xes")
        return entry.to_dict()

    @app.get("/api/logs")
    def list_logs():
        return [entry.to_dict() for entry in repository.list_artifacts()]

    @app.get("/api/logs/{artifact_id}")
    def get_log(artifact_id: str):
        entry = repository.get_artifact(artifact_id)
        stats = repository.statistics(artifact_id)
        return {
            "entry": entry.to_dict(),
            "statistics": stats.to_dict() if stats else None,
            "operations": repository.operations(artifact_id),
        }

    @app.get("/api/logs/{artifact_id}/dfg")
    def get_dfg(artifact_id: str):
        return dfg_to_json_dict(repository.preview_dfg(artifact_id))

    @app.post("/api/logs/{artifact_id}/apply")
    def apply(artifact_id: str, body: dict = Body(...)):
        technique = body.get("technique")
        if not isinstance(technique, str) or not technique:
            raise ParameterInvalid("request body must name a technique")
        parameters = body.get("parameters") or {}
        if not isinstance(parameters, dict):
            raise ParameterInvalid("parameters must be an object")
        job = repository.apply_technique(artifact_id, technique, parameters)
        return job.to_dict()

    @app.get("/api/logs/{artifact_id}/download")
    def download(artifact_id: str):
        data, name = repository.download(artifact_id)
        return Response(
            content=data,
            media_type="application/octet-stream",
            headers={"Content-Disposition": f'attachment; filename="{name}"'},
        )

    @app.delete("/api/logs/{artifact_id}", status_code=204)
    def delete(artifact_id: str):
        repository.delete(artifact_id)
        return Response(status_code=204)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="console")

    return app
