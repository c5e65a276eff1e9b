"""Population ingestion, run configuration and report rendering.

Two output formats are supported everywhere:

table       human-readable aligned text, numbers at 6 significant digits.
structured  a JSON document with a "kind" discriminator and stable key
            names, full float precision, byte-deterministic for identical
            inputs. The HTTP service emits the same documents, so clients
            can consume either transport with one parser.

CSV ingestion is locale-independent (dot decimal separator only); a cell
is missing when empty or one of na/n/a/nan/null/none (case-insensitive).
Missing cells are errors unless rows with them are explicitly dropped.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    Direction,
    NormalizedMatrix,
    ObjectiveSpec,
    Population,
    SelectionResult,
    build_population,
)
from .normalize import rank_transform
from .select import RankTable, SweepResult

__all__ = [
    "RunConfig",
    "load_run_config",
    "load_population_csv",
    "write_population_csv",
    "population_doc",
    "population_from_doc",
    "selection_doc",
    "sweep_doc",
    "front_doc",
    "rank_table_doc",
    "normalized_doc",
    "render_structured",
    "render_table",
    "export_report",
    "parse_p",
    "encode_p",
]

MISSING_TOKENS = {"", "na", "n/a", "nan", "null", "none"}


def parse_p(value) -> float:
    """Accept numbers or the strings "inf"/"infinity" for the exponent."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity"):
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"cannot parse p value {value!r}") from None
    return float(value)


def encode_p(p: float):
    """JSON has no infinity; infinite exponents serialize as "inf"."""
    return "inf" if math.isinf(p) else float(p)


@dataclass
class RunConfig:
    """One reproducible run: data schema plus method and preference knobs.

    Loaded from a JSON file; every CLI flag overrides its counterpart
    here. Objective names are validated against the data before any
    computation.
    """

    objectives: list[ObjectiveSpec] | None = None
    method: str = "rank"
    p: float = math.inf
    weights: list[float] | None = None
    alpha: float | None = None
    focus_objective: int = 0
    constraints: list[ConstraintRule] = field(default_factory=list)
    grid: int = 50
    format: str = "table"
    drop_incomplete: bool = False
    ideal: list[float] | None = None
    nadir: list[float] | None = None
    seed: int | None = None

    def criterion_config(self, k: int) -> CriterionConfig:
        """Resolve weights (explicit list wins, then alpha template, then
        equal weights) into a CriterionConfig for K objectives."""
        if self.weights is not None:
            return CriterionConfig(p=self.p, weights=np.asarray(self.weights, dtype=float))
        if self.alpha is not None:
            from .select import AlphaMapping

            w = AlphaMapping(self.focus_objective).weights(self.alpha, k)
            return CriterionConfig(p=self.p, weights=w)
        return CriterionConfig(p=self.p, weights=np.full(k, 1.0 / k))


def _objective_from_obj(obj) -> ObjectiveSpec:
    if isinstance(obj, str):
        return ObjectiveSpec(obj)
    try:
        return ObjectiveSpec(
            name=obj["name"],
            direction=Direction(obj.get("direction", "minimize")),
            display_unit=obj.get("display_unit"),
        )
    except (KeyError, TypeError) as err:
        raise ConfigError(f"bad objective entry {obj!r}: {err}") from None
    except ValueError as err:
        raise ConfigError(str(err)) from None


def load_run_config(path) -> RunConfig:
    """Read a JSON run configuration file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    known = {
        "objectives", "method", "p", "weights", "alpha", "focus_objective",
        "constraints", "grid", "format", "drop_incomplete", "ideal", "nadir", "seed",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig()
    if "objectives" in raw:
        cfg.objectives = [_objective_from_obj(o) for o in raw["objectives"]]
    if "method" in raw:
        cfg.method = str(raw["method"])
    if "p" in raw:
        cfg.p = parse_p(raw["p"])
    if "weights" in raw:
        cfg.weights = [float(w) for w in raw["weights"]]
    if "alpha" in raw:
        cfg.alpha = float(raw["alpha"])
    if "focus_objective" in raw:
        cfg.focus_objective = int(raw["focus_objective"])
    if "constraints" in raw:
        cfg.constraints = [ConstraintRule.from_text(c) for c in raw["constraints"]]
    if "grid" in raw:
        cfg.grid = int(raw["grid"])
    if "format" in raw:
        cfg.format = str(raw["format"])
    if "drop_incomplete" in raw:
        cfg.drop_incomplete = bool(raw["drop_incomplete"])
    if "ideal" in raw:
        cfg.ideal = [float(v) for v in raw["ideal"]]
    if "nadir" in raw:
        cfg.nadir = [float(v) for v in raw["nadir"]]
    if "seed" in raw:
        cfg.seed = int(raw["seed"])
    if cfg.format not in ("table", "structured"):
        raise ConfigError(f"format must be 'table' or 'structured', got {cfg.format!r}")
    return cfg


def _parse_cell(text: str, row: int, column: str) -> float:
    token = text.strip()
    try:
        value = float(token)
    except ValueError:
        raise DataError(
            f"cannot parse {token!r} as a number (row {row}, column {column!r})"
        ) from None
    if not math.isfinite(value):
        raise DataError(
            f"non-finite value {token!r} (row {row}, column {column!r})"
        )
    return value


def load_population_csv(
    source,
    objectives: Sequence[ObjectiveSpec] | None = None,
    drop_incomplete: bool = False,
) -> Population:
    """Load a population from a comma-delimited UTF-8 file with a header row.

    The first column provides model ids when its header is "model"
    (case-insensitive); otherwise ids are 1-based row numbers. Declared
    objectives are matched to columns by name (a missing one is an error,
    surplus file columns are ignored with a warning). Without a declared
    schema every data column becomes a minimize objective. Rows with
    missing cells are errors unless drop_incomplete is set, which drops
    them and reports the count.
    """
    if hasattr(source, "read"):
        rows = list(csv.reader(source))
        origin = "<stream>"
    else:
        origin = str(source)
        try:
            with open(source, newline="", encoding="utf-8") as fh:
                rows = list(csv.reader(fh))
        except OSError as err:
            raise DataError(f"cannot read {origin}: {err}") from None
    rows = [r for r in rows if r]  # ignore fully blank lines
    if not rows:
        raise DataError(f"{origin} is empty; expected a header row and data")
    header = [h.strip() for h in rows[0]]
    if not header or all(not h for h in header):
        raise DataError(f"{origin} has an empty header row")

    has_id_col = header[0].lower() == "model"
    data_names = header[1:] if has_id_col else header
    if objectives is None:
        specs = [ObjectiveSpec(name) for name in data_names]
    else:
        specs = list(objectives)
        available = set(data_names)
        for spec in specs:
            if spec.name not in available:
                raise DataError(
                    f"{origin} is missing declared objective column {spec.name!r}"
                )
        unmatched = [n for n in data_names if n not in {s.name for s in specs}]
        if unmatched:
            warnings.warn(
                f"{origin}: ignoring columns not declared as objectives: {unmatched}",
                stacklevel=2,
            )
    col_of = {}
    for spec in specs:
        col_of[spec.name] = data_names.index(spec.name) + (1 if has_id_col else 0)

    ids: list[str] = []
    scores: list[list[float]] = []
    dropped = 0
    for r, row in enumerate(rows[1:], start=1):
        cells = [c.strip() for c in row]
        if len(cells) < len(header):
            cells += [""] * (len(header) - len(cells))
        picked = []
        missing = None
        for spec in specs:
            raw = cells[col_of[spec.name]]
            if raw.lower() in MISSING_TOKENS:
                missing = spec.name
                break
            picked.append(_parse_cell(raw, r, spec.name))
        if missing is not None:
            if drop_incomplete:
                dropped += 1
                continue
            raise DataError(
                f"missing value in row {r}, column {missing!r}; "
                f"rerun with drop_incomplete to skip such rows"
            )
        ids.append(cells[0] if has_id_col else str(r))
        scores.append(picked)
    if dropped:
        warnings.warn(f"{origin}: dropped {dropped} incomplete row(s)", stacklevel=2)
    if not ids:
        raise DataError(f"{origin} contains no usable data rows")
    return build_population(ids, specs, scores)


def write_population_csv(population: Population, path) -> None:
    """Write a population as CSV with full-precision (round-trippable) floats."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["model", *population.objective_names])
            for i, mid in enumerate(population.model_ids):
                writer.writerow([mid, *[repr(float(v)) for v in population.scores[i]]])
    except OSError as err:
        raise DataError(f"cannot write {path}: {err}") from None


# --- structured documents -------------------------------------------------

def _objective_obj(spec: ObjectiveSpec) -> dict:
    return {
        "name": spec.name,
        "direction": spec.direction.value,
        "display_unit": spec.display_unit,
    }


def population_doc(population: Population) -> dict:
    return {
        "kind": "population",
        "model_ids": list(population.model_ids),
        "objectives": [_objective_obj(s) for s in population.objectives],
        "scores": [[float(v) for v in row] for row in population.scores],
    }


def population_from_doc(doc: dict) -> Population:
    """Inverse of population_doc; lossless for finite scores."""
    if doc.get("kind") != "population":
        raise DataError(f"expected a population document, got kind={doc.get('kind')!r}")
    specs = [_objective_from_obj(o) for o in doc["objectives"]]
    return build_population(doc["model_ids"], specs, doc["scores"])


def _criterion_obj(method: str, config: CriterionConfig) -> dict:
    return {
        "method": method,
        "p": encode_p(config.p),
        "weights": [float(w) for w in config.weights],
    }


def selection_doc(
    population: Population,
    result: SelectionResult,
    method: str,
    config: CriterionConfig,
    constraints: Sequence[ConstraintRule] = (),
    rank_values: np.ndarray | None = None,
) -> dict:
    """Selection report; top_percent is 100 * the rank-transform value of
    the selected model, i.e. the share of strictly better models."""
    if rank_values is None:
        rank_values = rank_transform(population).values
    u = rank_values[result.model_index]
    return {
        "kind": "selection",
        "criterion": _criterion_obj(method, config),
        "constraints": [str(c) for c in constraints],
        "objectives": list(population.objective_names),
        "model_id": result.model_id,
        "model_index": result.model_index,
        "criterion_value": float(result.criterion_value),
        "raw_values": [float(v) for v in result.raw_vector],
        "normalized_values": [float(v) for v in result.normalized_vector],
        "top_percent": [float(100.0 * v) for v in u],
        "is_pareto_optimal": result.is_pareto_optimal,
        "tie_broken": result.tie_broken,
    }


def sweep_doc(population: Population, result: SweepResult) -> dict:
    return {
        "kind": "sweep",
        "method": result.method,
        "p": encode_p(result.p),
        "grid_size": result.grid_size,
        "focus_objective": result.focus_objective,
        "objectives": list(population.objective_names),
        "entries": [
            {
                "alpha_lo": e.alpha_lo,
                "alpha_hi": e.alpha_hi,
                "alpha_mid": e.alpha_mid,
                "model_id": e.model_id,
                "model_index": e.model_index,
                "n_grid_points": e.n_grid_points,
                "criterion_value": float(e.selection.criterion_value),
                "raw_values": [float(v) for v in e.selection.raw_vector],
                "normalized_values": [float(v) for v in e.selection.normalized_vector],
            }
            for e in result.entries
        ],
    }


def front_doc(
    population: Population, front: set[int], rank_values: np.ndarray | None = None
) -> dict:
    indices = sorted(front)
    if rank_values is None:
        rank_values = rank_transform(population).values
    return {
        "kind": "front",
        "objectives": list(population.objective_names),
        "indices": indices,
        "model_ids": [population.model_ids[i] for i in indices],
        "raw_values": [[float(v) for v in population.scores[i]] for i in indices],
        "rank_values": [[float(v) for v in rank_values[i]] for i in indices],
    }


def rank_table_doc(table: RankTable) -> dict:
    return {
        "kind": "rank_table",
        "labels": list(table.labels),
        "model_ids": list(table.model_ids),
        "ranks": [[int(v) for v in row] for row in table.ranks],
    }


def normalized_doc(matrix: NormalizedMatrix) -> dict:
    pop = matrix.source
    return {
        "kind": "normalized",
        "method": matrix.method,
        "objectives": list(pop.objective_names),
        "model_ids": list(pop.model_ids),
        "values": [[float(v) for v in row] for row in matrix.values],
        "raw_values": [[float(v) for v in row] for row in pop.scores],
        "warnings": list(matrix.warnings),
    }


# --- rendering -------------------------------------------------------------

def render_structured(doc: dict) -> str:
    """Deterministic JSON with full float precision."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _fmt(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _text_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(headers), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


def render_table(doc: dict) -> str:
    """Aligned text rendering, 6 significant digits."""
    kind = doc.get("kind")
    if kind == "selection":
        crit = doc["criterion"]
        head = (
            f"selected: {doc['model_id']} (index {doc['model_index']})\n"
            f"method={crit['method']} p={crit['p']} "
            f"weights={[round(w, 6) for w in crit['weights']]}\n"
            f"criterion value: {_fmt(doc['criterion_value'])}   "
            f"pareto-optimal: {doc['is_pareto_optimal']}   "
            f"tie-broken: {doc['tie_broken']}\n"
        )
        if doc["constraints"]:
            head += "constraints: " + ", ".join(doc["constraints"]) + "\n"
        rows = [
            [name, _fmt(raw), _fmt(norm), _fmt(pct)]
            for name, raw, norm, pct in zip(
                doc["objectives"],
                doc["raw_values"],
                doc["normalized_values"],
                doc["top_percent"],
            )
        ]
        return head + _text_table(["objective", "raw", "normalized", "top-%"], rows)
    if kind == "sweep":
        head = (
            f"sweep: method={doc['method']} p={doc['p']} grid={doc['grid_size']} "
            f"focus={doc['objectives'][doc['focus_objective']]}\n"
        )
        rows = [
            [
                f"[{_fmt(e['alpha_lo'])}, {_fmt(e['alpha_hi'])}]",
                e["model_id"],
                str(e["n_grid_points"]),
                _fmt(e["criterion_value"]),
                " ".join(_fmt(v) for v in e["raw_values"]),
            ]
            for e in doc["entries"]
        ]
        return head + _text_table(
            ["alpha interval", "model", "points", "criterion", "raw values"], rows
        )
    if kind == "front":
        rows = [
            [mid, " ".join(_fmt(v) for v in raw), " ".join(_fmt(v) for v in rank)]
            for mid, raw, rank in zip(
                doc["model_ids"], doc["raw_values"], doc["rank_values"]
            )
        ]
        head = f"pareto front: {len(rows)} of population\n"
        return head + _text_table(["model", "raw values", "rank values"], rows)
    if kind == "rank_table":
        rows = [
            [mid, *[str(v) for v in rank_row]]
            for mid, rank_row in zip(doc["model_ids"], doc["ranks"])
        ]
        return _text_table(["model", *doc["labels"]], rows)
    if kind == "normalized":
        rows = [
            [mid, *[_fmt(v) for v in row]]
            for mid, row in zip(doc["model_ids"], doc["values"])
        ]
        head = f"normalized values: method={doc['method']}\n"
        for w in doc["warnings"]:
            head += f"warning: {w}\n"
        return head + _text_table(["model", *doc["objectives"]], rows)
    if kind == "population":
        rows = [
            [mid, *[_fmt(v) for v in row]]
            for mid, row in zip(doc["model_ids"], doc["scores"])
        ]
        names = [o["name"] for o in doc["objectives"]]
        return _text_table(["model", *names], rows)
    raise ConfigError(f"cannot render document kind {kind!r}")


def export_report(doc: dict, fmt: str = "structured") -> str:
    """Render a structured document in the requested format."""
    if fmt == "structured":
        return render_structured(doc)
    if fmt == "table":
        return render_table(doc)
    raise ConfigError(f"format must be 'table' or 'structured', got {fmt!r}")
