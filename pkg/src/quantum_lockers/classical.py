"""Classical players, the team game, and the two sequential analysis games."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError, EmptyLockerEncountered
from .model import BLUE, RED, Colouring, GameConfig, Permutation, Placement, TeamOutcome
from .referee import QuerySession, make_rng, referee_setup, sample_permutation

STRATEGIES = ("naive", "pointer", "shuffled-pointer")
FALLBACKS = (None, "uniform", "last-pointer")


@dataclass(frozen=True)
class StrategyKind:
    """Which classical strategy a team plays.

    ``fallback`` is what a player guesses when his label stays hidden:
    ``None`` scores such a player as a loss (the plain game, where a player
    wins only by opening his own locker), ``"uniform"`` guesses uniformly
    among unopened lockers, ``"last-pointer"`` guesses the last label seen.
    ``shared`` fixes the team's secret relabelling for ``shuffled-pointer``;
    when it is ``None`` the team draws a fresh uniform one each game.
    """

    name: str = "pointer"
    fallback: Optional[str] = None
    shared: Optional[Permutation] = None

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {', '.join(STRATEGIES)}; got {self.name!r}",
                              "strategy")
        if self.fallback == "none":
            object.__setattr__(self, "fallback", None)
        if self.fallback not in FALLBACKS:
            raise ConfigError(f"unknown fallback {self.fallback!r}", "fallback")
        if self.fallback == "last-pointer" and self.name == "naive":
            raise ConfigError("last-pointer fallback only applies to pointer strategies", "fallback")
        if self.shared is not None and self.name != "shuffled-pointer":
            raise ConfigError("a shared permutation only applies to shuffled-pointer", "strategy")


def check_compatible(cfg: GameConfig, kind: StrategyKind):
    if cfg.oracle == "colour":
        raise ConfigError("classical strategies do not use the colour oracle", "oracle")
    if kind.name != "naive" and cfg.oracle != "strong":
        raise ConfigError(f"{kind.name} needs the strong oracle to read locker contents", "oracle")
    if kind.shared is not None and len(kind.shared) != cfg.b:
        raise ConfigError("shared permutation size must equal the locker count", "strategy")


def _uniform_unopened(s: QuerySession, rng) -> Optional[int]:
    opened = {x for x, _ in s.transcript}
    unopened = [x for x in range(1, s.b + 1) if x not in opened]
    if not unopened:
        return None
    return unopened[int(rng.integers(len(unopened)))]


def naive_player(s: QuerySession, seed, oracle: str = "strong",
                 fallback: Optional[str] = None) -> Optional[int]:
    """Open ``budget`` distinct random lockers; return the one holding our label.

    Stops early once the label turns up.  Returns ``None`` when the label was
    not seen and ``fallback`` is ``None``.
    """
    rng = make_rng(seed)
    order = rng.permutation(s.b) + 1
    for x in order[:min(s.remaining, s.b)]:
        x = int(x)
        if oracle == "weak":
            if s.weak(x):
                return x
        elif s.strong(x) == s.player:
            return x
    if fallback == "uniform":
        return _uniform_unopened(s, rng)
    return None


def _follow(s: QuerySession, start: int, relabel, fallback, seed) -> Optional[int]:
    x = start
    last = None
    while s.remaining > 0:
        label = s.strong(x)
        if label is None:
            raise EmptyLockerEncountered(s.player, x)
        if label == s.player:
            return x
        last = label
        x = relabel(label)
    if fallback == "last-pointer" and last is not None:
        return relabel(last)
    if fallback in ("uniform", "last-pointer"):
        return _uniform_unopened(s, make_rng(seed))
    return None


def pointer_player(s: QuerySession, fallback: Optional[str] = None, seed=0) -> Optional[int]:
    """Open locker ``s.player``, then whichever locker each revealed label names."""
    return _follow(s, s.player, lambda j: j, fallback, seed)


def shuffled_pointer_player(s: QuerySession, shared: Permutation,
                            fallback: Optional[str] = None, seed=0) -> Optional[int]:
    """Pointer-following on lockers relabelled by the team's secret ``shared``.

    Label ``j`` is read as "go to locker ``shared(j)``", so the walk follows
    ``shared⁻¹ ∘ σ``, which is uniform for uniform ``shared`` whatever σ is.
    """
    return _follow(s, shared(s.player), shared, fallback, seed)


def play_team(placement: Placement, cfg: GameConfig, kind: StrategyKind, seed,
              colouring: Optional[Colouring] = None) -> TeamOutcome:
    """Every player plays alone against a fixed placement with a fresh session.

    The team's randomness (its secret relabelling, then each player's
    choices in turn) comes from one stream seeded by ``seed``.
    """
    check_compatible(cfg, kind)
    rng = make_rng(seed)
    shared = kind.shared
    if kind.name == "shuffled-pointer" and shared is None:
        shared = sample_permutation(cfg.b, rng)
    wins, queries = [], []
    for i in range(1, placement.n + 1):
        s = QuerySession(placement, i, cfg.budget, colouring)
        if kind.name == "naive":
            guess = naive_player(s, rng, cfg.oracle, kind.fallback)
        elif kind.name == "pointer":
            guess = pointer_player(s, kind.fallback, rng)
        else:
            guess = shuffled_pointer_player(s, shared, kind.fallback, rng)
        if cfg.variant == "coloured-slips":
            # a found slip shows its colour; otherwise guess one when allowed
            if guess == placement.slot(i) and any(x == guess for x, _ in s.transcript):
                won = True
            elif kind.fallback is not None:
                won = (RED if rng.integers(2) else BLUE) == colouring(i)
            else:
                won = False
        else:
            won = guess is not None and guess == placement.slot(i)
        wins.append(won)
        queries.append(s.used)
    return TeamOutcome(tuple(wins), tuple(queries))


def run_team_game(cfg: GameConfig, kind: StrategyKind, seed=None) -> TeamOutcome:
    """One full game; deterministic given ``seed`` (defaults to ``cfg.seed``).

    The referee draws from the stream first, then the team continues on it.
    """
    check_compatible(cfg, kind)
    rng = make_rng(cfg.seed if seed is None else seed)
    placement, colouring = referee_setup(cfg, rng)
    return play_team(placement, cfg, kind, rng, colouring)


def sequential_reveal_game(N: int, seed) -> bool:
    return reveal_game_trace(N, seed)[0]


def reveal_game_trace(N: int, seed) -> tuple[bool, int]:
    """Relaxed game of N² players where each round's opener reveals what he saw.

    The lowest-numbered remaining player opens N uniformly chosen remaining
    lockers.  If his label is among them, those N lockers and the N players
    whose labels they hold leave the game; otherwise the team loses.
    """
    if N < 1:
        raise ConfigError("N must be >= 1", "n")
    rng = make_rng(seed)
    n = N * N
    sigma = sample_permutation(n, rng)
    occupant = {sigma(i): i for i in range(1, n + 1)}
    lockers = list(range(1, n + 1))
    players = set(range(1, n + 1))
    opened_total = 0
    for _ in range(N):
        player = min(players)
        picks = rng.choice(len(lockers), size=N, replace=False)
        opened = [lockers[k] for k in picks]
        opened_total += N
        revealed = {occupant[x] for x in opened}
        if player not in revealed:
            return False, opened_total
        players -= revealed
        gone = set(opened)
        lockers = [x for x in lockers if x not in gone]
    return True, opened_total


def weak_sequential_game(t: int, seed) -> bool:
    return weak_sequential_trace(t, seed)[0]


def weak_sequential_trace(t: int, seed) -> tuple[bool, int]:
    """2t players take turns with ``t`` weak-oracle queries each.

    A player who finds his locker announces it and that locker is removed
    for everyone after him; his unsuccessful queries carry no information.
    Returns (team win, queries used in total).
    """
    if t < 1:
        raise ConfigError("t must be >= 1", "budget")
    rng = make_rng(seed)
    n = 2 * t
    placement = Placement.from_permutation(sample_permutation(n, rng))
    remaining = list(range(1, n + 1))
    used = 0
    for player in range(1, n + 1):
        s = QuerySession(placement, player, t)
        picks = rng.permutation(len(remaining))[:t]
        hit = None
        for k in picks:
            x = remaining[k]
            if s.weak(x):
                hit = x
                break
        used += s.used
        if hit is None:
            return False, used
        remaining.remove(hit)
    return True, used
