"""HTTP service over immutable population snapshots.

Uploads create a handle holding the parsed population plus a precomputed
rank matrix and Pareto front; queries never mutate a snapshot, so any
number of clients can read concurrently. Responses reuse the CLI's
structured documents byte for byte.

Error statuses carry machine-readable codes aligned with the CLI exit
codes: 400 usage_error/data_error, 404 not_found, 413 payload_too_large,
422 infeasible.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from io import StringIO
from pathlib import Path
from typing import Sequence

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import io as pio
from .core import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    InfeasibleError,
    NormalizedMatrix,
    ObjectiveSpec,
    Population,
)
from .normalize import normalize, rank_transform
from .pareto import pareto_front
from .select import AlphaMapping, select_best, sweep_alpha

__all__ = ["create_app", "app", "HandleStore", "PopulationHandle"]

MAX_PAYLOAD_BYTES = 50 * 1024 * 1024
MAX_ROWS = 100_000


class PayloadTooLarge(ValueError):
    pass


class UnknownHandle(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class PopulationHandle:
    """Immutable snapshot plus precomputed views; ids are never reused."""

    id: str
    created_at: str
    population: Population
    rank_matrix: NormalizedMatrix
    front: frozenset[int]


class HandleStore:
    """In-memory handle map with optional write-through JSON persistence."""

    def __init__(self, persist_dir: str | Path | None = None):
        self._handles: dict[str, PopulationHandle] = {}
        self._lock = threading.Lock()
        self._persist_dir = Path(persist_dir) if persist_dir else None
        if self._persist_dir:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            self._reload()

    def _reload(self) -> None:
        for path in sorted(self._persist_dir.glob("*.json")):
            record = json.loads(path.read_text(encoding="utf-8"))
            population = pio.population_from_doc(record["population"])
            handle = _build_handle(
                population, handle_id=record["id"], created_at=record["created_at"]
            )
            self._handles[handle.id] = handle

    def add(self, population: Population) -> PopulationHandle:
        handle = _build_handle(population)
        with self._lock:
            self._handles[handle.id] = handle
        if self._persist_dir:
            record = {
                "id": handle.id,
                "created_at": handle.created_at,
                "population": pio.population_doc(population),
            }
            path = self._persist_dir / f"{handle.id}.json"
            path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
        return handle

    def get(self, handle_id: str) -> PopulationHandle:
        try:
            return self._handles[handle_id]
        except KeyError:
            raise UnknownHandle(handle_id) from None

    def __len__(self) -> int:
        return len(self._handles)


def _build_handle(
    population: Population,
    handle_id: str | None = None,
    created_at: str | None = None,
) -> PopulationHandle:
    return PopulationHandle(
        id=handle_id or uuid.uuid4().hex,
        created_at=created_at or datetime.now(timezone.utc).isoformat(),
        population=population,
        rank_matrix=rank_transform(population),
        front=frozenset(pareto_front(population)),
    )


class ObjectiveModel(BaseModel):
    name: str
    direction: str = "minimize"
    display_unit: str | None = None


class CreatePopulationRequest(BaseModel):
    csv_text: str
    objectives: list[ObjectiveModel] | None = None
    drop_incomplete: bool = False


class SelectRequest(BaseModel):
    method: str = "rank"
    p: float | str = "inf"
    weights: list[float] | None = None
    alpha: float | None = None
    focus_objective: int = 0
    constraints: list[str] = Field(default_factory=list)


class SweepRequest(BaseModel):
    method: str = "rank"
    p: float | str = "inf"
    grid: int = 50
    focus_objective: int = 0
    constraints: list[str] = Field(default_factory=list)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _specs(models: list[ObjectiveModel] | None) -> list[ObjectiveSpec] | None:
    if models is None:
        return None
    return [
        ObjectiveSpec(m.name, direction=m.direction, display_unit=m.display_unit)
        for m in models
    ]


def _criterion(
    population: Population, p, weights, alpha, focus_objective
) -> CriterionConfig:
    p = pio.parse_p(p)
    k = population.n_objectives
    if weights is not None:
        return CriterionConfig(p=p, weights=np.asarray(weights, dtype=float))
    if alpha is not None:
        return CriterionConfig(
            p=p, weights=AlphaMapping(focus_objective).weights(alpha, k)
        )
    return CriterionConfig(p=p, weights=np.full(k, 1.0 / k))


def _constraints(texts: Sequence[str], population: Population) -> list[ConstraintRule]:
    rules = [ConstraintRule.from_text(t) for t in texts]
    for rule in rules:
        population.objective_index(rule.objective_name)  # unknown name -> ConfigError
    return rules


def create_app(
    persist_dir: str | Path | None = None,
    max_payload_bytes: int = MAX_PAYLOAD_BYTES,
    max_rows: int = MAX_ROWS,
) -> FastAPI:
    app = FastAPI(title="paretonav", docs_url=None, redoc_url=None)
    store = HandleStore(persist_dir)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        return _error(400, "usage_error", str(exc.errors()))

    @app.exception_handler(ConfigError)
    async def _on_config(request: Request, exc: ConfigError):
        return _error(400, "usage_error", str(exc))

    @app.exception_handler(DataError)
    async def _on_data(request: Request, exc: DataError):
        return _error(400, "data_error", str(exc))

    @app.exception_handler(InfeasibleError)
    async def _on_infeasible(request: Request, exc: InfeasibleError):
        return _error(422, "infeasible", str(exc))

    @app.exception_handler(UnknownHandle)
    async def _on_unknown(request: Request, exc: UnknownHandle):
        return _error(404, "not_found", f"unknown population id {exc.args[0]!r}")

    @app.exception_handler(PayloadTooLarge)
    async def _on_too_large(request: Request, exc: PayloadTooLarge):
        return _error(413, "payload_too_large", str(exc))

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "populations": len(store)}

    @app.post("/populations", status_code=201)
    def create_population(req: CreatePopulationRequest):
        payload = req.csv_text.encode("utf-8")
        if len(payload) > max_payload_bytes:
            raise PayloadTooLarge(
                f"payload of {len(payload)} bytes exceeds limit {max_payload_bytes}"
            )
        population = pio.load_population_csv(
            StringIO(req.csv_text),
            objectives=_specs(req.objectives),
            drop_incomplete=req.drop_incomplete,
        )
        if population.n_models > max_rows:
            raise PayloadTooLarge(
                f"{population.n_models} rows exceed the limit of {max_rows}"
            )
        handle = store.add(population)
        return {
            "id": handle.id,
            "created_at": handle.created_at,
            "n_models": population.n_models,
            "n_objectives": population.n_objectives,
            "objectives": [s.name for s in population.objectives],
        }

    @app.get("/populations/{handle_id}/front")
    def get_front(handle_id: str):
        handle = store.get(handle_id)
        return pio.front_doc(
            handle.population, set(handle.front), rank_values=handle.rank_matrix.values
        )

    @app.get("/populations/{handle_id}/normalized")
    def get_normalized(handle_id: str, method: str = "rank"):
        handle = store.get(handle_id)
        if method == "rank":
            matrix = handle.rank_matrix
        else:
            matrix = normalize(handle.population, method)
        return pio.normalized_doc(matrix)

    @app.post("/populations/{handle_id}/select")
    def post_select(handle_id: str, req: SelectRequest):
        handle = store.get(handle_id)
        population = handle.population
        config = _criterion(population, req.p, req.weights, req.alpha, req.focus_objective)
        constraints = _constraints(req.constraints, population)
        normalized = handle.rank_matrix if req.method == "rank" else None
        result = select_best(
            population, req.method, config, constraints, normalized=normalized
        )
        return pio.selection_doc(
            population,
            result,
            req.method,
            config,
            constraints,
            rank_values=handle.rank_matrix.values,
        )

    @app.post("/populations/{handle_id}/sweep")
    def post_sweep(handle_id: str, req: SweepRequest):
        handle = store.get(handle_id)
        population = handle.population
        constraints = _constraints(req.constraints, population)
        result = sweep_alpha(
            population,
            method=req.method,
            p=pio.parse_p(req.p),
            grid_size=req.grid,
            mapping=AlphaMapping(req.focus_objective),
            constraints=constraints,
        )
        return pio.sweep_doc(population, result)

    return app


app = create_app()
