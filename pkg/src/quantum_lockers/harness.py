"""Batch experiments: seeded trials, closed-form references, CSV/JSON reports."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Optional

from . import analytics
from .errors import ConfigError
from .model import GameConfig
from .montecarlo import ALL_STRATEGIES, check_strategy, play_trial
from .referee import trial_seed

COLUMNS = ("variant", "strategy", "n", "b", "budget", "referee", "trials", "wins",
           "frequency", "stderr", "reference", "pass", "mean_queries", "master_seed")
SWEEPABLE = ("n", "b", "budget", "variant", "oracle", "referee", "colouring", "seed")
FORMATS = ("csv", "json")
THREADS_ENV = "QUANTUM_LOCKERS_THREADS"
CHUNK = 2000


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 100
    b: Optional[int] = None
    budget: Optional[int] = None
    variant: str = "standard"
    oracle: Optional[str] = None
    referee: str = "uniform"
    colouring: str = "random"
    strategy: str = "pointer"
    fallback: Optional[str] = None
    trials: int = 1000
    master_seed: int = 0
    output: Optional[str] = None
    format: str = "csv"
    sweep: tuple = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}", "trials")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got {self.format!r}", "format")
        if self.strategy not in ALL_STRATEGIES:
            raise ConfigError(
                f"strategy must be one of {', '.join(ALL_STRATEGIES)}; got {self.strategy!r}",
                "strategy")
        for name, values in self.sweep:
            if name not in SWEEPABLE:
                raise ConfigError(f"cannot sweep {name!r}; sweepable: {', '.join(SWEEPABLE)}",
                                  "sweep")
            if not values:
                raise ConfigError(f"sweep over {name} has no values", "sweep")

    def grid(self) -> list[tuple[dict, "ExperimentConfig"]]:
        """(swept values, config) per sweep grid point, in parameter order."""
        if not self.sweep:
            return [({}, self)]
        names = [name for name, _ in self.sweep]
        out = []
        for combo in itertools.product(*(values for _, values in self.sweep)):
            values = dict(zip(names, combo))
            changes = dict(values)
            if "seed" in changes:
                changes["master_seed"] = changes.pop("seed")
            out.append((values, replace(self, sweep=(), **changes)))
        return out

    def game(self) -> GameConfig:
        """The GameConfig for a single grid point, filling strategy-dependent defaults."""
        b = self.n if self.b is None else self.b
        budget = self.budget
        if budget is None:
            if self.strategy == "reveal":
                budget = math.isqrt(self.n)
            else:
                budget = b // 2
        oracle = self.oracle
        if oracle is None:
            if self.strategy == "quantum":
                oracle = "colour" if self.variant == "coloured-slips" else "weak"
            elif self.strategy == "weak-sequential":
                oracle = "weak"
            else:
                oracle = "strong"
        return GameConfig(n=self.n, b=b, budget=budget, variant=self.variant, oracle=oracle,
                          referee=self.referee, colouring=self.colouring, seed=self.master_seed)


@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)
    sweep: tuple = ()
    # swept parameter values behind each row, aligned with ``rows``
    points: list = field(default_factory=list)


def reference_value(cfg: GameConfig, strategy: str, fallback=None) -> Optional[Fraction]:
    """Closed-form team success for this configuration, when one is known."""
    n, b, t = cfg.n, cfg.b, cfg.budget
    if strategy == "quantum":
        return Fraction(1)
    if strategy == "reveal":
        return analytics.reveal_game_exact(math.isqrt(n))
    if strategy == "weak-sequential":
        return analytics.weak_sequential_exact(n // 2)
    if strategy == "naive":
        if fallback is None:
            return analytics.naive_team_exact(n, b, t)
        if fallback == "uniform" and t < b:
            miss = 1 - Fraction(t, b)
            if cfg.variant == "coloured-slips":
                return (Fraction(t, b) + miss / 2) ** n
            return (Fraction(t, b) + miss * Fraction(1, b - t)) ** n
        return None
    if fallback is not None or b != n:
        return None
    if strategy == "shuffled-pointer" or cfg.referee == "uniform":
        return analytics.pointer_success_exact(n, t)
    if cfg.referee == "cheating" and t < n // 2 + 2:
        return Fraction(0)
    return None


def _run_chunk(args):
    cfg, strategy, kind, master_seed, start, stop = args
    return [tuple(play_trial(cfg, strategy, kind, trial_seed(master_seed, i)))
            for i in range(start, stop)]


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}", THREADS_ENV) from None


def run_trials(cfg: GameConfig, strategy: str, fallback, trials: int, master_seed: int,
               workers: Optional[int] = None) -> list:
    """Outcomes of trials 0..trials-1; trial i always uses the seed (master_seed, i)."""
    kind = check_strategy(cfg, strategy, fallback)
    workers = thread_count() if workers is None else workers
    if workers <= 1 or trials <= CHUNK:
        return _run_chunk((cfg, strategy, kind, master_seed, 0, trials))
    jobs = [(cfg, strategy, kind, master_seed, lo, min(lo + CHUNK, trials))
            for lo in range(0, trials, CHUNK)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, so output order never depends on scheduling
        return [r for chunk in pool.map(_run_chunk, jobs) for r in chunk]


def _strategy_label(strategy, fallback):
    return strategy if fallback is None else f"{strategy}/{fallback}"


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    rows, points = [], []
    for values, point in cfg.grid():
        points.append(values)
        game = point.game()
        results = run_trials(game, point.strategy, point.fallback, point.trials, point.master_seed)
        wins = sum(1 for r in results if r[0])
        T = len(results)
        freq = wins / T
        stderr = math.sqrt(freq * (1 - freq) / T)
        ref = reference_value(game, point.strategy, point.fallback)
        passed = None
        if ref is not None:
            sd = math.sqrt(float(ref * (1 - ref)) / T)
            passed = freq == float(ref) if sd == 0 else abs(freq - float(ref)) <= 3 * sd
        rows.append({
            "variant": game.variant,
            "strategy": _strategy_label(point.strategy, point.fallback),
            "n": game.n,
            "b": game.b,
            "budget": game.budget,
            "referee": game.referee,
            "trials": T,
            "wins": wins,
            "frequency": freq,
            "stderr": stderr,
            "reference": None if ref is None else float(ref),
            "pass": passed,
            "mean_queries": sum(r[1] for r in results) / sum(r[2] for r in results),
            "master_seed": point.master_seed,
        })
    return ExperimentReport(rows, cfg.sweep, points)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def render_report(report: ExperimentReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in report.rows:
            writer.writerow([_cell(row[c]) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: _json_value(row[c]) for c in COLUMNS} for row in report.rows]
        return json.dumps(rows, indent=2) + "\n"
    raise ConfigError(f"format must be csv or json, got {fmt!r}", "format")


def emit_report(report: ExperimentReport, fmt: str, path) -> str:
    """Write the report to ``path``; raises OSError when the destination is not writable."""
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return str(path)


def config_field_names() -> tuple:
    return tuple(f.name for f in fields(ExperimentConfig))
