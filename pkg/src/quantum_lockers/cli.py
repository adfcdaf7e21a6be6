"""Command line: ``quantum-lockers {simulate,exact,quantum,sweep,verify}``.

Settings come from an optional flat ``key = value`` file (``--config``) and
are overridden by flags.  Exit codes: 0 ok, 1 config error, 2 acceptance
failure, 3 I/O error.  ``QUANTUM_LOCKERS_THREADS`` sets the worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import analytics
from .classical import StrategyKind
from .errors import ConfigError, LockerError
from .harness import (ExperimentConfig, SWEEPABLE, emit_report, render_report, run_experiment)
from .quantum import plan_exact_grover, query_bound, standard_grover_probability

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

INT_KEYS = ("n", "b", "budget", "trials", "seed", "t", "N", "iterations")
FILE_KEYS = ("n", "b", "budget", "strategy", "fallback", "variant", "oracle", "referee",
             "colouring", "trials", "seed", "out", "format", "sweep", "plot")


def _value(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


def parse_sweep(specs) -> tuple:
    """``["n=4,16,64", "budget=2,8"]`` -> ``(("n", (4, 16, 64)), ("budget", (2, 8)))``."""
    out = []
    for spec in specs or ():
        for part in spec.split(";"):
            if not part.strip():
                continue
            name, sep, values = part.partition("=")
            name = name.strip()
            if not sep:
                raise ConfigError(f"sweep must look like name=v1,v2; got {part!r}", "sweep")
            if name not in SWEEPABLE:
                raise ConfigError(f"cannot sweep {name!r}; sweepable: {', '.join(SWEEPABLE)}",
                                  "sweep")
            out.append((name, tuple(_value(v) for v in values.split(",") if v.strip())))
    return tuple(out)


def read_config_file(path) -> dict:
    settings = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}", "config") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: expected one of {', '.join(FILE_KEYS)} = value",
                              key or "config")
        value = value.strip()
        if key in INT_KEYS:
            try:
                value = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} must be an integer", key) from None
        elif key == "plot":
            value = value.lower() in ("1", "true", "yes", "on")
        elif key == "sweep":
            value = [value]
        settings[key] = value
    return settings


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value settings file; flags override it")
    p.add_argument("--n", type=int, help="number of players")
    p.add_argument("--b", type=int, help="number of lockers (default n)")
    p.add_argument("--budget", type=int, help="queries per player (default b/2)")
    p.add_argument("--variant", help="standard, empty-lockers or coloured-slips")
    p.add_argument("--oracle", help="weak, strong or colour")
    p.add_argument("--referee", help="uniform or cheating")
    p.add_argument("--colouring", help="random, all-red or all-blue")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="report destination (stdout when omitted)")
    p.add_argument("--format", help="csv or json")
    p.add_argument("--sweep", action="append", metavar="NAME=V1,V2",
                   help="parameter grid; repeat for a product grid")
    p.add_argument("--plot", action="store_true", default=None,
                   help="also render a PNG figure next to --out")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are config errors; exit code 2 is reserved for verify
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quantum-lockers",
                     description="Classical and quantum locker-puzzle experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo team games")
    _common(p)
    p.add_argument("--strategy", help="naive, pointer, shuffled-pointer, quantum, reveal, "
                                      "weak-sequential")
    p.add_argument("--fallback", help="none, uniform or last-pointer")

    p = sub.add_parser("sweep", help="Monte Carlo over a parameter grid")
    _common(p)
    p.add_argument("--strategy")
    p.add_argument("--fallback")

    p = sub.add_parser("quantum", help="quantum team games and search statistics")
    _common(p)
    p.add_argument("--series", action="store_true",
                   help="emit success probability per iteration for --b instead of games")
    p.add_argument("--iterations", type=int, help="last iteration count in --series (default 3·plan)")

    p = sub.add_parser("exact", help="closed forms and exhaustive enumeration")
    p.add_argument("formula", choices=analytics.FORMULA_IDS + ("brute-force",))
    p.add_argument("--n", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--strategy", default="pointer")
    p.add_argument("--fallback")

    sub.add_parser("verify", help="run every acceptance check")
    return parser


def _settings(args) -> dict:
    settings = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in FILE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def experiment_from(settings: dict, **forced) -> ExperimentConfig:
    settings = {**settings, **forced}
    kwargs = {}
    for key in ("n", "b", "budget", "variant", "oracle", "referee", "colouring", "strategy",
                "trials", "format"):
        if settings.get(key) is not None:
            kwargs[key] = settings[key]
    fallback = settings.get("fallback")
    kwargs["fallback"] = None if fallback in (None, "none") else fallback
    if settings.get("seed") is not None:
        kwargs["master_seed"] = settings["seed"]
    if settings.get("out"):
        kwargs["output"] = settings["out"]
    kwargs["sweep"] = parse_sweep(settings.get("sweep"))
    return ExperimentConfig(**kwargs)


def _deliver(report, cfg: ExperimentConfig, plot: bool):
    if cfg.output:
        emit_report(report, cfg.format, cfg.output)
        if plot:
            from .plotting import figure_path, plot_report
            plot_report(report, figure_path(cfg.output))
    else:
        if plot:
            raise ConfigError("--plot needs --out to know where the figure goes", "plot")
        sys.stdout.write(render_report(report, cfg.format))


def cmd_experiment(args, **forced) -> int:
    settings = _settings(args)
    cfg = experiment_from(settings, **forced)
    if args.command == "sweep" and not cfg.sweep:
        raise ConfigError("sweep needs at least one --sweep NAME=V1,V2", "sweep")
    _deliver(run_experiment(cfg), cfg, bool(settings.get("plot")))
    return EXIT_OK


def grover_series(b: int, last: int) -> list:
    return [{"k": k, "standard": standard_grover_probability(b, k)} for k in range(last + 1)]


def cmd_quantum(args) -> int:
    if not args.series:
        return cmd_experiment(args, strategy="quantum")
    settings = _settings(args)
    b = settings.get("b") or settings.get("n")
    if not b:
        raise ConfigError("--series needs --b (or --n)", "b")
    plan = plan_exact_grover(b)
    last = args.iterations if args.iterations is not None else max(3 * plan.iterations, 1)
    series = grover_series(b, last)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("b", "k", "standard_success", "exact_iterations", "exact_phase", "query_bound"))
    for row in series:
        writer.writerow((b, row["k"], f"{row['standard']:.12g}", plan.iterations,
                         f"{plan.oracle_phase:.12g}", query_bound(b)))
    out = settings.get("out")
    if out:
        Path(out).write_text(buf.getvalue(), encoding="utf-8")
        if settings.get("plot"):
            from .plotting import figure_path, plot_grover_series
            plot_grover_series(series, figure_path(out), plan.iterations)
    else:
        if settings.get("plot"):
            raise ConfigError("--plot needs --out to know where the figure goes", "plot")
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_exact(args) -> int:
    if args.formula == "brute-force":
        if args.n is None:
            raise ConfigError("brute-force needs --n", "n")
        budget = args.budget if args.budget is not None else args.n // 2
        fallback = None if args.fallback in (None, "none") else args.fallback
        kind = StrategyKind(args.strategy, fallback)
        value = analytics.brute_force_team_success(args.n, budget, kind)
        result = analytics.ExactResult(value, "brute-force",
                                       {"n": args.n, "budget": budget, "strategy": args.strategy})
    else:
        params = {k: getattr(args, k) for k in ("n", "b", "budget", "t", "N")}
        if args.formula == "naive-team" and params["b"] is None:
            params["b"] = params["n"]
        if params["budget"] is None and params["n"] is not None and args.formula != "naive-team":
            params["budget"] = params["n"] // 2
        result = analytics.evaluate(args.formula, **params)
    shown = ", ".join(f"{k}={v}" for k, v in result.parameters.items())
    print(f"{result.formula_id}({shown}) = {result.as_text()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, usage errors exit EXIT_CONFIG; return instead of raising
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        if args.command in ("simulate", "sweep"):
            return cmd_experiment(args)
        if args.command == "quantum":
            return cmd_quantum(args)
        if args.command == "exact":
            return cmd_exact(args)
        return cmd_verify(args)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LockerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
