"""Command-line entry point.

Subcommands: select, sweep, front, rank, normalize, gen-synthetic, serve.
A JSON config file (--config) provides defaults; every flag overrides its
config counterpart. Exit codes: 0 success, 1 usage or configuration
error, 2 data error, 3 infeasible constraint set.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io as pio
from .core import (
    ConfigError,
    ConstraintRule,
    DataError,
    InfeasibleError,
)
from .normalize import normalize
from .pareto import pareto_front
from .select import (
    AlphaMapping,
    default_rank_criteria,
    rank_methods,
    select_best,
    sweep_alpha,
)
from .synthetic import DEFAULT_N, DEFAULT_SEED, synthetic_front

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3

METHOD_CHOICES = ("rank", "delta", "minmax", "maxnorm", "ccdf", "saw", "ahp", "mew")


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        raise ConfigError(message)


def _add_common(sub: argparse.ArgumentParser, with_method: bool = True) -> None:
    sub.add_argument("--config", help="JSON run-config file")
    sub.add_argument("--input", help="population CSV file")
    sub.add_argument("--format", choices=("table", "structured"), default=None)
    sub.add_argument(
        "--drop-incomplete",
        action="store_true",
        default=None,
        help="drop rows with missing cells instead of failing",
    )
    sub.add_argument(
        "--objective",
        action="append",
        metavar="NAME[:DIRECTION]",
        help="declare an objective column (repeatable); default direction minimize",
    )
    if with_method:
        sub.add_argument("--method", choices=METHOD_CHOICES, default=None)


def _add_preferences(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", default=None, help="criterion exponent, a number or 'inf'")
    sub.add_argument("--alpha", type=float, default=None, help="focus-objective weight")
    sub.add_argument(
        "--weights", default=None, help="comma-separated weight vector, e.g. 0.5,0.5"
    )
    sub.add_argument("--focus", type=int, default=None, help="focus objective index")
    sub.add_argument(
        "--constraint",
        action="append",
        default=None,
        metavar="RULE",
        help='raw-value bound like "co2<=0.5" (repeatable)',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paretonav", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    p_select = commands.add_parser("select", help="pick the best model")
    _add_common(p_select)
    _add_preferences(p_select)

    p_sweep = commands.add_parser("sweep", help="sweep the focus weight over [0,1]")
    _add_common(p_sweep)
    _add_preferences(p_sweep)
    p_sweep.add_argument("--grid", type=int, default=None, help="number of grid points")

    p_front = commands.add_parser("front", help="print the Pareto front")
    _add_common(p_front, with_method=False)

    p_rank = commands.add_parser("rank", help="rank models under several criteria")
    _add_common(p_rank, with_method=False)

    p_norm = commands.add_parser("normalize", help="print normalized values")
    _add_common(p_norm)

    p_gen = commands.add_parser(
        "gen-synthetic", help="write the seeded synthetic trade-off fixture"
    )
    p_gen.add_argument("--n", type=int, default=DEFAULT_N)
    p_gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_gen.add_argument("--out", help="output CSV path (default stdout)")

    p_serve = commands.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--persist-dir", default=None)

    return parser


def _parse_objective_flag(text: str):
    from .core import ObjectiveSpec

    name, _, direction = text.partition(":")
    return ObjectiveSpec(name.strip(), direction=direction.strip() or "minimize")


def _run_config(args) -> pio.RunConfig:
    cfg = pio.load_run_config(args.config) if args.config else pio.RunConfig()
    if getattr(args, "objective", None):
        cfg.objectives = [_parse_objective_flag(t) for t in args.objective]
    if getattr(args, "method", None):
        cfg.method = args.method
    if getattr(args, "p", None) is not None:
        cfg.p = pio.parse_p(args.p)
    if getattr(args, "alpha", None) is not None:
        cfg.alpha = args.alpha
        cfg.weights = None
    if getattr(args, "weights", None):
        cfg.weights = [float(w) for w in args.weights.split(",")]
    if getattr(args, "focus", None) is not None:
        cfg.focus_objective = args.focus
    if getattr(args, "constraint", None):
        cfg.constraints = [ConstraintRule.from_text(t) for t in args.constraint]
    if getattr(args, "grid", None) is not None:
        cfg.grid = args.grid
    if getattr(args, "format", None):
        cfg.format = args.format
    if getattr(args, "drop_incomplete", None):
        cfg.drop_incomplete = True
    return cfg


def _population(args, cfg: pio.RunConfig):
    if not args.input:
        raise ConfigError("--input CSV path is required for this command")
    return pio.load_population_csv(
        args.input, objectives=cfg.objectives, drop_incomplete=cfg.drop_incomplete
    )


def _emit(doc: dict, fmt: str, out=None) -> None:
    (out or sys.stdout).write(pio.export_report(doc, fmt))


def _select_scores_baseline(population, cfg):
    """SAW/AHP/MEW produce their own score vectors; smallest wins."""
    import numpy as np

    from .criterion import ahp_scores, mew_scores, saw_scores

    k = population.n_objectives
    weights = cfg.criterion_config(k).weights
    fn = {"saw": saw_scores, "ahp": ahp_scores, "mew": mew_scores}[cfg.method]
    scores = fn(population, weights)
    index = int(np.lexsort((np.arange(len(scores)), scores))[0])
    return index, float(scores[index])


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "gen-synthetic":
        population = synthetic_front(args.n, args.seed)
        if args.out:
            pio.write_population_csv(population, args.out)
        else:
            _emit(pio.population_doc(population), "structured")
        return EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(
            create_app(persist_dir=args.persist_dir), host=args.host, port=args.port
        )
        return EXIT_OK

    cfg = _run_config(args)
    population = _population(args, cfg)

    if args.command == "front":
        _emit(pio.front_doc(population, pareto_front(population)), cfg.format)
        return EXIT_OK

    if args.command == "rank":
        table = rank_methods(population, default_rank_criteria(population))
        _emit(pio.rank_table_doc(table), cfg.format)
        return EXIT_OK

    if args.command == "normalize":
        if cfg.method not in ("rank", "delta", "minmax", "maxnorm", "ccdf"):
            raise ConfigError(f"normalize does not support method {cfg.method!r}")
        kwargs = {}
        if cfg.method in ("delta", "minmax"):
            if cfg.ideal is not None:
                kwargs["ideal"] = cfg.ideal
            if cfg.nadir is not None:
                kwargs["nadir"] = cfg.nadir
        _emit(pio.normalized_doc(normalize(population, cfg.method, **kwargs)), cfg.format)
        return EXIT_OK

    if args.command == "select":
        if cfg.method in ("saw", "ahp", "mew"):
            index, value = _select_scores_baseline(population, cfg)
            doc = {
                "kind": "baseline_selection",
                "method": cfg.method,
                "model_id": population.model_ids[index],
                "model_index": index,
                "score": value,
            }
            if cfg.format == "structured":
                _emit(doc, "structured")
            else:
                sys.stdout.write(
                    f"selected: {doc['model_id']} (index {index}) "
                    f"method={cfg.method} score={value:.6g}\n"
                )
            return EXIT_OK
        config = cfg.criterion_config(population.n_objectives)
        normalized = None
        if cfg.method in ("delta", "minmax") and (cfg.ideal or cfg.nadir):
            from .normalize import baseline_normalize

            normalized = baseline_normalize(
                population, cfg.method, ideal=cfg.ideal, nadir=cfg.nadir
            )
        result = select_best(
            population, cfg.method, config, cfg.constraints, normalized=normalized
        )
        _emit(
            pio.selection_doc(
                population, result, cfg.method, config, cfg.constraints
            ),
            cfg.format,
        )
        return EXIT_OK

    if args.command == "sweep":
        result = sweep_alpha(
            population,
            method=cfg.method,
            p=cfg.p,
            grid_size=cfg.grid,
            mapping=AlphaMapping(cfg.focus_objective),
            constraints=cfg.constraints,
        )
        _emit(pio.sweep_doc(population, result), cfg.format)
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except InfeasibleError as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
