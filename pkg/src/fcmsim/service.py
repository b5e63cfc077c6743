"""HTTP service exposing the model registry and the engine.

The registry is a directory of JSON files, one per stored model, so a
restart with the same --storage-dir sees the same models. Writes go
through a per-entry lock and a temp-file rename, which keeps entries
readable under concurrent updates.

Status codes: 400 for a document that fails schema checks (the detail
carries the offending path), 404 for unknown ids in the URL, 422 for a
request that references things the stored model does not have or asks
for a config outside the service caps. A run that fails to converge is
still a 200; the outcome carries its status.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .fixtures import FIXTURE_IDS, load_fixture_document
from .inference import (
    ClampOutOfRange,
    InferenceConfig,
    UnknownClampId,
    config_from_obj,
    outcome_to_obj,
    run_scenario,
)
from .io import DocumentError, SchemaViolation, document_from_obj, document_to_obj
from .metrics import rank_by_centrality, report_to_obj, structural_metrics
from .scenario import (
    ScenarioSpec,
    compare_scenarios,
    report_to_obj as comparison_to_obj,
)

_ID_RE = re.compile(r"^[A-Za-z0-9._-]{1,64}$")

MAX_ITERATIONS_CAP = 10_000


class ModelRegistry:
    """One JSON file per model id under a root directory."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, model_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(model_id, threading.Lock())

    def _path(self, model_id: str) -> Path:
        return self.root / f"{model_id}.json"

    @staticmethod
    def valid_id(model_id: str) -> bool:
        return bool(_ID_RE.match(model_id))

    @staticmethod
    def _now() -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")

    def list(self) -> list[dict[str, Any]]:
        rows = []
        for path in sorted(self.root.glob("*.json")):
            try:
                entry = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            rows.append(
                {
                    "id": entry["id"],
                    "name": entry["document"].get("model", {}).get("name", ""),
                    "created": entry["created"],
                    "updated": entry["updated"],
                }
            )
        return rows

    def get(self, model_id: str) -> dict[str, Any] | None:
        if not self.valid_id(model_id):
            return None
        path = self._path(model_id)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None

    def put(self, model_id: str, document_obj: dict) -> tuple[dict[str, Any], bool]:
        """Store a document under the id. Returns (entry, created)."""
        with self._lock_for(model_id):
            existing = self.get(model_id)
            now = self._now()
            entry = {
                "id": model_id,
                "created": existing["created"] if existing else now,
                "updated": now,
                "document": document_obj,
            }
            tmp = self._path(model_id).with_suffix(".tmp")
            tmp.write_text(
                json.dumps(entry, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            tmp.replace(self._path(model_id))
            return entry, existing is None

    def create(self, document_obj: dict) -> dict[str, Any]:
        entry, _ = self.put(uuid.uuid4().hex, document_obj)
        return entry

    def delete(self, model_id: str) -> bool:
        if not self.valid_id(model_id):
            return False
        with self._lock_for(model_id):
            try:
                self._path(model_id).unlink()
                return True
            except FileNotFoundError:
                return False


def _not_found(model_id: str) -> JSONResponse:
    return JSONResponse(
        status_code=404, content={"detail": f"no model with id {model_id!r}"}
    )


def _schema_error(exc: Exception) -> JSONResponse:
    detail: dict[str, Any] = {"reason": str(exc)}
    if isinstance(exc, SchemaViolation):
        detail["path"] = exc.path
    return JSONResponse(status_code=400, content={"detail": detail})


def _unprocessable(reason: str) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": reason})


async def _read_json_body(request: Request) -> Any:
    raw = await request.body()
    if not raw:
        raise SchemaViolation("/", "empty request body")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("/", f"request body is not valid JSON: {exc.msg}")


def create_app(
    storage_dir: str | Path,
    enable_cors: bool = False,
    seed_fixtures: bool = True,
    max_iterations_cap: int = MAX_ITERATIONS_CAP,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="fcmsim", version=__version__, docs_url="/docs")
    registry = ModelRegistry(Path(storage_dir))
    app.state.registry = registry

    if seed_fixtures:
        for fid in FIXTURE_IDS:
            if registry.get(fid) is None:
                doc = load_fixture_document(fid)
                registry.put(fid, document_to_obj(doc))

    if enable_cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def _load_entry(model_id: str):
        entry = registry.get(model_id)
        if entry is None:
            return None, None
        return entry, document_from_obj(entry["document"])

    @app.get("/models")
    async def list_models() -> list[dict]:
        return registry.list()

    @app.post("/models", status_code=201)
    async def create_model(request: Request):
        try:
            body = await _read_json_body(request)
            doc = document_from_obj(body)
        except DocumentError as exc:
            return _schema_error(exc)
        entry = registry.create(document_to_obj(doc))
        return {
            "id": entry["id"],
            "created": entry["created"],
            "updated": entry["updated"],
        }

    @app.get("/models/{model_id}")
    async def get_model(model_id: str):
        entry = registry.get(model_id)
        if entry is None:
            return _not_found(model_id)
        return entry

    @app.put("/models/{model_id}")
    async def put_model(model_id: str, request: Request):
        if not registry.valid_id(model_id):
            return _unprocessable(
                "model id may only contain letters, digits, dot, dash, underscore"
            )
        try:
            body = await _read_json_body(request)
            doc = document_from_obj(body)
        except DocumentError as exc:
            return _schema_error(exc)
        entry, created = registry.put(model_id, document_to_obj(doc))
        payload = {
            "id": entry["id"],
            "created": entry["created"],
            "updated": entry["updated"],
        }
        return JSONResponse(status_code=201 if created else 200, content=payload)

    @app.delete("/models/{model_id}")
    async def delete_model(model_id: str):
        if not registry.delete(model_id):
            return _not_found(model_id)
        return {"deleted": model_id}

    @app.get("/models/{model_id}/metrics")
    async def model_metrics(model_id: str, self_pairs: bool = False):
        entry, doc = _load_entry(model_id)
        if entry is None:
            return _not_found(model_id)
        report = structural_metrics(doc.model, include_self_pairs=self_pairs)
        obj = report_to_obj(report)
        obj["model"] = doc.model.name
        obj["ranking"] = [[cid, value] for cid, value in rank_by_centrality(doc.model)]
        return obj

    @app.post("/models/{model_id}/run")
    async def run_model(model_id: str, request: Request):
        entry, doc = _load_entry(model_id)
        if entry is None:
            return _not_found(model_id)
        try:
            body = await _read_json_body(request)
        except SchemaViolation as exc:
            return _schema_error(exc)
        if not isinstance(body, dict):
            return _schema_error(SchemaViolation("/", "expected an object"))

        clamps = body.get("clamps")
        scenario_name = body.get("scenario")
        if clamps is not None and scenario_name is not None:
            return _unprocessable("give either clamps or scenario, not both")

        if scenario_name is not None:
            available = {s.name: s for s in (doc.scenarios or ())}
            if scenario_name not in available:
                return _unprocessable(
                    f"model has no scenario named {scenario_name!r}"
                )
            spec = available[scenario_name]
        else:
            if clamps is None:
                clamps = {}
            if not isinstance(clamps, dict):
                return _unprocessable("clamps must be an object of id: value")
            try:
                spec = ScenarioSpec(
                    name="request", model_ref=model_id, clamps=clamps
                )
            except (ClampOutOfRange, TypeError, ValueError) as exc:
                return _unprocessable(str(exc))

        config: InferenceConfig | None = None
        if body.get("config") is not None:
            try:
                config = config_from_obj(body["config"])
            except (TypeError, ValueError) as exc:
                return _unprocessable(f"config: {exc}")
            # an explicit request config wins over the scenario override
            if spec.config_override is not None:
                spec = dataclasses.replace(spec, config_override=None)
        elif doc.config is not None and spec.config_override is None:
            config = doc.config

        effective = spec.config_override or config or InferenceConfig()
        if effective.max_iterations > max_iterations_cap:
            return _unprocessable(
                f"max_iterations {effective.max_iterations} exceeds the "
                f"service cap of {max_iterations_cap}"
            )

        try:
            outcome = run_scenario(doc.model, spec, config)
        except (UnknownClampId, ClampOutOfRange) as exc:
            return _unprocessable(str(exc))
        obj = outcome_to_obj(outcome)
        obj["model_id"] = model_id
        return obj

    @app.post("/compare")
    async def compare(request: Request):
        try:
            body = await _read_json_body(request)
        except SchemaViolation as exc:
            return _schema_error(exc)
        if not isinstance(body, dict) or not isinstance(body.get("runs"), list):
            return _schema_error(
                SchemaViolation("/runs", "expected an object with a runs array")
            )
        if not body["runs"]:
            return _unprocessable("runs is empty")

        config = None
        if body.get("config") is not None:
            try:
                config = config_from_obj(body["config"])
            except (TypeError, ValueError) as exc:
                return _unprocessable(f"config: {exc}")

        models = {}
        specs: list[ScenarioSpec] = []
        for i, run in enumerate(body["runs"]):
            if not isinstance(run, dict) or not isinstance(run.get("model_id"), str):
                return _schema_error(
                    SchemaViolation(f"/runs/{i}/model_id", "expected a string")
                )
            model_id = run["model_id"]
            if model_id not in models:
                entry, doc = _load_entry(model_id)
                if entry is None:
                    return _unprocessable(f"no model with id {model_id!r}")
                models[model_id] = doc
            doc = models[model_id]
            if run.get("scenario") is not None:
                available = {s.name: s for s in (doc.scenarios or ())}
                if run["scenario"] not in available:
                    return _unprocessable(
                        f"model {model_id!r} has no scenario named "
                        f"{run['scenario']!r}"
                    )
                base = available[run["scenario"]]
                name = run.get("name") or base.name
                try:
                    spec = ScenarioSpec(
                        name=name,
                        model_ref=model_id,
                        clamps=base.clamps,
                        config_override=base.config_override,
                    )
                except (ClampOutOfRange, TypeError, ValueError) as exc:
                    return _unprocessable(str(exc))
            else:
                clamps = run.get("clamps") or {}
                if not isinstance(clamps, dict):
                    return _unprocessable(
                        f"runs[{i}]: clamps must be an object of id: value"
                    )
                name = run.get("name") or f"run-{i + 1}"
                try:
                    spec = ScenarioSpec(name=name, model_ref=model_id, clamps=clamps)
                except (ClampOutOfRange, TypeError, ValueError) as exc:
                    return _unprocessable(str(exc))
            specs.append(spec)

        if len({s.name for s in specs}) != len(specs):
            return _unprocessable("comparison names must be unique; pass name per run")

        model_map = {mid: doc.model for mid, doc in models.items()}
        try:
            report = compare_scenarios(specs, model_map, config)
        except (UnknownClampId, ClampOutOfRange) as exc:
            return _unprocessable(str(exc))
        return comparison_to_obj(report)

    @app.get("/fixtures")
    async def list_fixtures():
        rows = []
        for fid in FIXTURE_IDS:
            doc = load_fixture_document(fid)
            rows.append({"id": fid, "name": doc.model.name})
        return rows

    @app.get("/fixtures/{fixture_id}")
    async def get_fixture(fixture_id: str):
        if fixture_id not in FIXTURE_IDS:
            return JSONResponse(
                status_code=404,
                content={"detail": f"no fixture with id {fixture_id!r}"},
            )
        return document_to_obj(load_fixture_document(fixture_id))

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/")
        async def root():
            return {
                "service": "fcmsim",
                "version": __version__,
                "endpoints": [
                    "/models",
                    "/models/{id}",
                    "/models/{id}/metrics",
                    "/models/{id}/run",
                    "/compare",
                    "/fixtures",
                    "/fixtures/{id}",
                ],
            }

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fcmsim-serve", description="Serve the model registry over HTTP."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument(
        "--storage-dir",
        default=os.environ.get("FCMSIM_STORAGE_DIR", "fcmsim-models"),
        help="directory for stored models (env FCMSIM_STORAGE_DIR)",
    )
    parser.add_argument("--cors", action="store_true", help="allow any origin")
    parser.add_argument(
        "--ui-dir", default=None, help="serve a built web UI from this directory"
    )
    args = parser.parse_args(argv)

    import uvicorn

    app = create_app(args.storage_dir, enable_cors=args.cors, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
