"""Exit checks for the toolkit, shared by the test-suite and ``quantum-lockers verify``.

Each check returns a ``Check``; a check passes only when its numbers hold at
the stated tolerance *and* it finishes inside its time limit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import analytics
from .classical import StrategyKind
from .harness import run_trials
from .model import GameConfig
from .quantum import exact_grover_state, plan_exact_grover, query_bound, run_quantum_game, \
    standard_grover_probability
from .referee import make_rng, trial_seed

MASTER_SEED = 20100705


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    limit: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s / {self.limit:g}s)"


def _within_3sigma(wins, trials, p):
    p = float(p)
    freq = wins / trials
    sd = math.sqrt(p * (1 - p) / trials)
    return abs(freq - p) <= 3 * sd, freq, sd


def _timed(number, name, limit):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            elapsed = time.perf_counter() - t0
            if elapsed >= limit:
                ok = False
                detail += "; over time limit"
            return Check(number, name, ok, detail, elapsed, limit)
        run.__name__ = fn.__name__
        run.number = number
        return run
    return wrap


def _wins(cfg, strategy, fallback, trials, seed=MASTER_SEED):
    results = run_trials(cfg, strategy, fallback, trials, seed)
    return sum(1 for r in results if r[0]), results


@_timed(1, "pointer-following exact success by enumeration", 5)
def pointer_enumeration():
    parts = []
    ok = True
    for n in (2, 4, 6, 8):
        brute = analytics.brute_force_team_success(n, n // 2, StrategyKind("pointer"))
        closed = 1 - analytics.pointer_failure_exact(n)
        ok &= brute == closed
        parts.append(f"n={n}: {brute} vs {closed}")
    return ok, "; ".join(parts)


@_timed(2, "ln 2 limit and monotone decrease", 5)
def ln2_limit():
    gap = abs(analytics.pointer_failure_exact(10**6) - mpmath.log(2))
    floor = analytics.pointer_success_limit()
    succ = [1 - analytics.pointer_failure_exact(n) for n in range(2, 201, 2)]
    monotone = all(a > b for a, b in zip(succ, succ[1:]))
    above = all(mpmath.mpf(s.numerator) / s.denominator > floor for s in succ)
    ok = gap < 1e-5 and monotone and above
    return ok, (f"|failure(10^6) - ln 2| = {float(gap):.3e}; decreasing={monotone}; "
                f"above 1-ln2={above}")


@_timed(3, "naive baseline 1/2^n", 10)
def naive_baseline():
    cfg = GameConfig(n=4, budget=2)
    wins, _ = _wins(cfg, "naive", None, 10**5)
    ok, freq, sd = _within_3sigma(wins, 10**5, Fraction(1, 16))
    return ok, f"frequency {freq:.5f} vs 1/16 = 0.0625 (3σ = {3 * sd:.5f})"


@_timed(4, "exact search certainty", 30)
def quantum_certainty():
    rng = make_rng(MASTER_SEED)
    worst = 1.0
    ok = True
    for b in (2, 4, 16, 100, 1000):
        plan = plan_exact_grover(b)
        ok &= plan.iterations <= query_bound(b)
        for marked in rng.integers(1, b + 1, size=10):
            state = exact_grover_state(b, int(marked))
            p = float(abs(state[int(marked) - 1]) ** 2)
            worst = min(worst, p)
    ok &= worst >= 1 - 1e-9
    return ok, f"worst marked probability 1 - {1 - worst:.2e}; iterations within bound={ok}"


@_timed(5, "standard Grover failure at most 1/n", 1)
def standard_grover_bound():
    p = standard_grover_probability(100, math.floor(math.pi / 4 * 10))
    return p >= 0.99, f"success after 7 iterations at b=100: {p:.6f}"


@_timed(6, "quantum team certainty at n=b=64", 30)
def quantum_team():
    cfg = GameConfig(n=64, budget=32, oracle="weak")
    wins = 0
    worst = 0
    for g in range(100):
        out = run_quantum_game(cfg, trial_seed(MASTER_SEED, g))
        wins += out.team_win
        worst = max(worst, max(out.per_player_queries))
    ok = wins == 100 and worst <= 7 < 32
    return ok, f"team wins {wins}/100; max per-player queries {worst} (classical budget 32)"


@_timed(7, "reveal game matches 1/N!", 60)
def reveal_game():
    ok = True
    parts = []
    for N in (2, 3, 4):
        cfg = GameConfig(n=N * N, budget=N)
        wins, _ = _wins(cfg, "reveal", None, 10**5)
        good, freq, sd = _within_3sigma(wins, 10**5, analytics.reveal_game_exact(N))
        ok &= good
        parts.append(f"N={N}: {freq:.5f} vs {float(analytics.reveal_game_exact(N)):.5f}")
    return ok, "; ".join(parts)


@_timed(8, "weak-oracle sequential game and Stirling form", 60)
def weak_sequential():
    ok = True
    parts = []
    for t in (1, 2, 3, 4):
        cfg = GameConfig(n=2 * t, budget=t, oracle="weak")
        wins, _ = _wins(cfg, "weak-sequential", None, 10**5)
        exact = analytics.weak_sequential_exact(t)
        good, freq, sd = _within_3sigma(wins, 10**5, exact)
        ok &= good
        parts.append(f"t={t}: {freq:.5f} vs {float(exact):.5f}")
    rel = max(abs(analytics.weak_sequential_stirling(t) / float(analytics.weak_sequential_exact(t)) - 1)
              for t in range(8, 65))
    ok &= rel <= 0.10
    parts.append(f"Stirling max relative error t>=8: {rel:.4f}")
    return ok, "; ".join(parts)


@_timed(9, "cheating referee and the shuffle defense", 60)
def cheating_referee():
    cfg = GameConfig(n=100, budget=50, referee="cheating")
    trials = 10**4
    plain, _ = _wins(cfg, "pointer", "uniform", trials)
    shuffled, _ = _wins(cfg, "shuffled-pointer", "uniform", trials)
    target = 1 - analytics.pointer_failure_exact(100)
    good, freq, sd = _within_3sigma(shuffled, trials, target)
    qcfg = GameConfig(n=100, budget=50, referee="cheating", oracle="weak")
    qgames = 200
    qwins = sum(run_quantum_game(qcfg, trial_seed(MASTER_SEED, g)).team_win for g in range(qgames))
    ok = plain / trials <= 1e-3 and good and qwins == qgames
    return ok, (f"plain pointer {plain / trials:.4f}; shuffled {freq:.4f} vs {float(target):.4f} "
                f"(3σ = {3 * sd:.4f}); quantum {qwins}/{qgames}")


@_timed(10, "coloured slips answered with certainty", 30)
def coloured_slips():
    limit = math.ceil(math.pi / 4 * math.sqrt(64)) + 2
    ok = True
    parts = []
    for mode in ("all-red", "all-blue", "random"):
        cfg = GameConfig(n=32, b=64, variant="coloured-slips", oracle="colour", colouring=mode)
        wins = 0
        worst = 0
        for g in range(200):
            out = run_quantum_game(cfg, trial_seed(MASTER_SEED, g))
            wins += out.team_win
            worst = max(worst, max(out.per_player_queries))
        ok &= wins == 200 and worst <= limit
        parts.append(f"{mode}: {wins}/200, max queries {worst}")
    return ok, "; ".join(parts) + f" (limit {limit})"


@_timed(11, "empty lockers with quantum players", 30)
def empty_lockers():
    limit = math.ceil(math.pi / 4 * math.sqrt(128)) + 1
    cfg = GameConfig(n=32, b=128, variant="empty-lockers", oracle="weak", budget=64)
    games = 200
    wins = 0
    worst = 0
    for g in range(games):
        out = run_quantum_game(cfg, trial_seed(MASTER_SEED, g))
        wins += out.team_win
        worst = max(worst, max(out.per_player_queries))
    ok = wins == games and worst <= limit
    return ok, f"team wins {wins}/{games}; max per-player queries {worst} (limit {limit})"


@_timed(12, "team queries on the n·√n scale", 10)
def query_order():
    ok = True
    parts = []
    for n in (64, 256, 1024):
        out = run_quantum_game(GameConfig(n=n, oracle="weak"), MASTER_SEED)
        ratio = out.total_queries / (n * math.sqrt(n))
        ok &= 0.5 <= ratio <= 1.2 and out.team_win
        parts.append(f"n={n}: {out.total_queries} queries, ratio {ratio:.3f}")
    return ok, "; ".join(parts)


CHECKS = (pointer_enumeration, ln2_limit, naive_baseline, quantum_certainty,
          standard_grover_bound, quantum_team, reveal_game, weak_sequential,
          cheating_referee, coloured_slips, empty_lockers, query_order)


def run_all(echo=print) -> list:
    results = []
    for check in CHECKS:
        result = check()
        if echo:
            echo(result.line())
        results.append(result)
    return results
