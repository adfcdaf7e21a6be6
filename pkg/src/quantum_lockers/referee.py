"""Referee side: seeded placements, the adversarial permutation, and oracles.

Randomness comes from numpy's Philox counter-based generator keyed by a
``SeedSequence``.  Per-trial streams are ``SeedSequence(master, spawn_key=(i,))``
so trial ``i`` sees the same stream however many trials run around it.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import BudgetExceeded, ConfigError, IndexOutOfRange, InvalidN
from .model import BLUE, RED, Colouring, GameConfig, Permutation, Placement


def make_rng(seed) -> np.random.Generator:
    """Generator for an int seed, a SeedSequence, or pass a Generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def trial_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))


def child_seed(seed, k) -> np.random.SeedSequence:
    """Deterministic k-th child stream (``SeedSequence.spawn`` is stateful)."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + (k,))


def sample_permutation(n: int, seed) -> Permutation:
    if n < 1:
        raise InvalidN(f"n must be >= 1, got {n}")
    rng = make_rng(seed)
    return Permutation(rng.permutation(n) + 1)


def sample_placement(n: int, b: int, seed) -> Placement:
    """Uniform injection of labels 1..n into lockers 1..b."""
    if not b >= n >= 1:
        raise InvalidN(f"need b >= n >= 1, got n={n}, b={b}")
    rng = make_rng(seed)
    if b == n:
        return Placement(rng.permutation(n) + 1, b)
    return Placement(rng.choice(b, size=n, replace=False) + 1, b)


def plant_long_cycle(n: int, seed) -> tuple[Permutation, tuple[int, ...]]:
    """Cheating referee's permutation plus the planted order ``(i_1, ..., i_s)``.

    ``s = n/2 + 2`` players are wired so that ``σ(i_1) = i_s`` and
    ``σ(i_{j+1}) = i_j``; the rest is a uniform bijection on what is left.
    """
    if n % 2 or n < 4:
        raise InvalidN(f"cheating referee needs an even n >= 4, got {n}")
    rng = make_rng(seed)
    s = n // 2 + 2
    order = rng.permutation(n) + 1
    planted = order[:s]
    rest = order[s:]
    sigma = [0] * n
    sigma[planted[0] - 1] = planted[-1]
    for j in range(s - 1):
        sigma[planted[j + 1] - 1] = planted[j]
    # the planted players occupy exactly the planted lockers
    if len(rest):
        targets = rng.permutation(rest)
        for i, x in zip(rest, targets):
            sigma[i - 1] = x
    return Permutation(sigma), tuple(int(x) for x in planted)


def cheating_permutation(n: int, seed) -> Permutation:
    return plant_long_cycle(n, seed)[0]


def sample_colouring(n: int, mode: str, seed) -> Colouring:
    if mode == "all-red":
        return Colouring((RED,) * n)
    if mode == "all-blue":
        return Colouring((BLUE,) * n)
    if mode != "random":
        raise ConfigError(f"unknown colouring mode {mode!r}", "colouring")
    rng = make_rng(seed)
    return Colouring(tuple(RED if r else BLUE for r in rng.integers(0, 2, size=n)))


def referee_placement(cfg: GameConfig, seed) -> Placement:
    """The placement the referee commits to for one game under ``cfg``."""
    if cfg.referee == "cheating":
        return Placement.from_permutation(cheating_permutation(cfg.n, seed))
    return sample_placement(cfg.n, cfg.b, seed)


def referee_setup(cfg: GameConfig, seed):
    """Placement and (for coloured slips) colouring the referee commits to.

    Draws come first from the game's stream, before any player randomness.
    """
    rng = make_rng(seed)
    placement = referee_placement(cfg, rng)
    colouring = None
    if cfg.variant == "coloured-slips":
        colouring = sample_colouring(cfg.n, cfg.colouring, rng)
    return placement, colouring


class QuerySession:
    """One player's budgeted, transcribed access to the lockers.

    Sessions are single-owner mutable state; give each player a fresh one.
    """

    def __init__(self, placement: Placement, player: int, budget: int,
                 colouring: Optional[Colouring] = None):
        if not 1 <= player <= placement.n:
            raise IndexOutOfRange(f"player {player} outside 1..{placement.n}")
        if budget < 0:
            raise ConfigError("budget must be >= 0", "budget")
        self._placement = placement
        self._colouring = colouring
        self.player = player
        self.budget = budget
        self.transcript: list[tuple[int, object]] = []

    @property
    def b(self) -> int:
        return self._placement.b

    @property
    def n(self) -> int:
        return self._placement.n

    @property
    def used(self) -> int:
        return len(self.transcript)

    @property
    def remaining(self) -> int:
        return self.budget - len(self.transcript)

    def _open(self, x):
        if len(self.transcript) >= self.budget:
            raise BudgetExceeded(
                f"player {self.player} exhausted the budget of {self.budget} queries")
        if not 1 <= x <= self._placement.b:
            raise IndexOutOfRange(f"locker {x} outside 1..{self._placement.b}")
        return self._placement.occupant(x)

    def weak(self, x: int) -> int:
        answer = int(self._open(x) == self.player)
        self.transcript.append((x, answer))
        return answer

    def strong(self, x: int) -> Optional[int]:
        answer = self._open(x)
        self.transcript.append((x, answer))
        return answer

    def colour(self, x: int) -> int:
        if self._colouring is None:
            raise ConfigError("colour query without a colouring", "oracle")
        content = self._open(x)
        answer = int(content == self.player and self._colouring(self.player) == RED)
        self.transcript.append((x, answer))
        return answer


def weak_query(s: QuerySession, x: int) -> int:
    return s.weak(x)


def strong_query(s: QuerySession, x: int) -> Optional[int]:
    return s.strong(x)


def colour_query(s: QuerySession, x: int) -> int:
    return s.colour(x)
