"""Per-trial kernels for batch experiments.

``run_team_game`` replays every query through a session, which is faithful
but too slow for 10^5 games of 100 players.  The kernels here reach the same
outcome from the cycle structure instead.  They draw the placement, the
colouring and the shuffled-pointer relabelling from the same seed streams as
``run_team_game`` (one stream per game, referee first), so deterministic
strategies give the same team result for the same seed; the players' own
random choices are drawn differently.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .classical import StrategyKind, check_compatible, reveal_game_trace, weak_sequential_trace
from .errors import ConfigError
from .model import BLUE, RED, GameConfig
from .quantum import run_quantum_game
from .referee import make_rng, referee_setup, sample_permutation

CLASSICAL = ("naive", "pointer", "shuffled-pointer")
SPECIAL = ("quantum", "reveal", "weak-sequential")
ALL_STRATEGIES = CLASSICAL + SPECIAL


class TrialResult(NamedTuple):
    win: bool
    queries: int
    players: int


def walk_lengths(step: list) -> list:
    """Cycle length through each index of the 0-based map ``step``."""
    n = len(step)
    length = [0] * n
    for start in range(n):
        if length[start]:
            continue
        cyc = [start]
        j = step[start]
        while j != start:
            cyc.append(j)
            j = step[j]
        for k in cyc:
            length[k] = len(cyc)
    return length


def _pointer_trial(cfg: GameConfig, kind: StrategyKind, seed) -> TrialResult:
    rng = make_rng(seed)
    placement, colouring = referee_setup(cfg, rng)
    occupants = placement.occupants
    if None in occupants:
        raise ConfigError("pointer strategies need every locker filled (b == n)", "b")
    if kind.name == "shuffled-pointer":
        shared = kind.shared if kind.shared is not None else sample_permutation(cfg.b, rng)
        relabel = shared.mapping
    else:
        relabel = range(1, cfg.n + 1)
    # label j sends the player to locker relabel(j), whose content is the next label
    step = [occupants[relabel[j] - 1] - 1 for j in range(cfg.n)]
    lengths = walk_lengths(step)
    t = cfg.budget
    queries = 0
    team = True
    for i in range(cfg.n):
        L = lengths[i]
        if L <= t:
            queries += L
            continue
        queries += t
        if not team:
            continue
        team = _fallback_wins(cfg, kind, rng, colouring, i + 1, cycle_len=L)
    return TrialResult(team, queries, cfg.n)


def _fallback_wins(cfg, kind, rng, colouring, label, cycle_len=None) -> bool:
    t = cfg.budget
    if kind.fallback is None:
        return False
    if cfg.variant == "coloured-slips":
        return (RED if rng.integers(2) else BLUE) == colouring(label)
    if kind.fallback == "last-pointer" and t >= 1 and cycle_len is not None:
        return cycle_len == t + 1
    unopened = cfg.b - min(t, cfg.b)
    return unopened > 0 and rng.random() * unopened < 1


def _naive_trial(cfg: GameConfig, kind: StrategyKind, seed) -> TrialResult:
    rng = make_rng(seed)
    colouring = None
    if cfg.variant == "coloured-slips":
        # a naive player's success ignores where labels sit, only colours matter
        _, colouring = referee_setup(cfg, rng)
    t = min(cfg.budget, cfg.b)
    # position of the own locker in a uniformly random opening order
    ranks = rng.integers(0, cfg.b, size=cfg.n)
    queries = 0
    team = True
    for i, r in enumerate(ranks):
        if r < t:
            queries += int(r) + 1
            continue
        queries += t
        if team:
            team = _fallback_wins(cfg, kind, rng, colouring, i + 1)
    return TrialResult(team, queries, cfg.n)


def _reveal_trial(cfg: GameConfig, seed) -> TrialResult:
    N = math.isqrt(cfg.n)
    win, opened = reveal_game_trace(N, make_rng(seed))
    return TrialResult(win, opened, cfg.n)


def _weak_sequential_trial(cfg: GameConfig, seed) -> TrialResult:
    win, used = weak_sequential_trace(cfg.n // 2, make_rng(seed))
    return TrialResult(win, used, cfg.n)


def check_strategy(cfg: GameConfig, strategy: str, fallback=None) -> StrategyKind | None:
    """Validate a (config, strategy) pair; returns the StrategyKind for classical ones."""
    if strategy not in ALL_STRATEGIES:
        raise ConfigError(f"strategy must be one of {', '.join(ALL_STRATEGIES)}; got {strategy!r}",
                          "strategy")
    if strategy == "reveal":
        N = math.isqrt(cfg.n)
        if N * N != cfg.n or cfg.b != cfg.n or cfg.budget != N:
            raise ConfigError("reveal game needs n = b = N² and budget = N", "n")
        return None
    if strategy == "weak-sequential":
        if cfg.n % 2 or cfg.b != cfg.n or cfg.budget != cfg.n // 2:
            raise ConfigError("weak-sequential game needs even n = b and budget = n/2", "n")
        return None
    if strategy == "quantum":
        return None
    kind = StrategyKind(strategy, fallback)
    check_compatible(cfg, kind)
    if kind.name != "naive" and cfg.b != cfg.n:
        raise ConfigError("pointer strategies are undefined with empty lockers (b > n)", "b")
    return kind


def play_trial(cfg: GameConfig, strategy: str, kind, seed) -> TrialResult:
    """One seeded game; ``kind`` is what ``check_strategy`` returned for ``cfg``."""
    if strategy == "quantum":
        out = run_quantum_game(cfg, seed)
        return TrialResult(out.team_win, out.total_queries, cfg.n)
    if strategy == "reveal":
        return _reveal_trial(cfg, seed)
    if strategy == "weak-sequential":
        return _weak_sequential_trial(cfg, seed)
    if kind.name == "naive":
        return _naive_trial(cfg, kind, seed)
    return _pointer_trial(cfg, kind, seed)
