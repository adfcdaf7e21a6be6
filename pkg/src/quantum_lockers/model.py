"""Permutations, placements and the shared game records.

Everything here is 1-based at the boundary: ``Permutation((2, 3, 1))`` means
label 1 sits in locker 2, label 2 in locker 3 and label 3 in locker 1.
Instances are immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConfigError, IndexOutOfRange

RED = "red"
BLUE = "blue"
COLOURS = (RED, BLUE)

VARIANTS = ("standard", "empty-lockers", "coloured-slips")
ORACLES = ("weak", "strong", "colour")
REFEREES = ("uniform", "cheating")
COLOUR_MODES = ("random", "all-red", "all-blue")


class Permutation:
    """A bijection of {1..n}; ``p(i)`` is the locker holding label ``i``."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Sequence[int]):
        if hasattr(mapping, "tolist"):
            m = tuple(mapping.tolist())
        else:
            m = tuple(int(x) for x in mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError(f"not a permutation of 1..{len(m)}: {m}")
        self._map = m

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @property
    def mapping(self) -> tuple:
        return self._map

    def __call__(self, i: int) -> int:
        return self._map[i - 1]

    def __len__(self):
        return len(self._map)

    def __iter__(self):
        return iter(self._map)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self):
        return hash(self._map)

    def __repr__(self):
        return f"Permutation({self._map})"

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self ∘ other``, i.e. ``i -> self(other(i))``."""
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return Permutation(self._map[j - 1] for j in other._map)


def invert(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p.mapping, start=1):
        inv[x - 1] = i
    return Permutation(inv)


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles of ``p``, sorted by minimum element.

    Each cycle starts at its minimum and lists ``i, p(i), p(p(i)), ...``.
    """
    n = len(p)
    seen = [False] * (n + 1)
    cycles = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p(i)
        cycles.append(tuple(cyc))
    return cycles


def cycle_lengths(p: Permutation) -> list[int]:
    return [len(c) for c in cycle_decomposition(p)]


def longest_cycle(p: Permutation) -> int:
    return max(cycle_lengths(p))


def cycle_of(p: Permutation, i: int) -> tuple[int, ...]:
    """The cycle through ``i``, starting at ``i``."""
    cyc = [i]
    j = p(i)
    while j != i:
        cyc.append(j)
        j = p(j)
    return tuple(cyc)


class Placement:
    """Injective assignment of labels {1..n} to lockers {1..b}.

    With ``b == n`` this is exactly a permutation; otherwise ``b - n``
    lockers stay empty.
    """

    __slots__ = ("n", "b", "_slot", "_occupant")

    def __init__(self, slot: Sequence[int], b: Optional[int] = None):
        slot = tuple(slot.tolist()) if hasattr(slot, "tolist") else tuple(int(x) for x in slot)
        n = len(slot)
        b = n if b is None else int(b)
        if n < 1 or b < n:
            raise ValueError(f"need b >= n >= 1, got n={n}, b={b}")
        if len(set(slot)) != n or min(slot) < 1 or max(slot) > b:
            raise ValueError(f"slot map is not injective into 1..{b}: {slot}")
        occ = [None] * b
        for label, locker in enumerate(slot, start=1):
            occ[locker - 1] = label
        self.n = n
        self.b = b
        self._slot = slot
        self._occupant = tuple(occ)

    @classmethod
    def from_permutation(cls, p: Permutation) -> "Placement":
        return cls(p.mapping, len(p))

    @property
    def slots(self) -> tuple:
        return self._slot

    @property
    def occupants(self) -> tuple:
        """Contents of lockers 1..b (``None`` for an empty locker)."""
        return self._occupant

    def slot(self, label: int) -> int:
        if not 1 <= label <= self.n:
            raise IndexOutOfRange(f"label {label} outside 1..{self.n}")
        return self._slot[label - 1]

    def occupant(self, locker: int) -> Optional[int]:
        if not 1 <= locker <= self.b:
            raise IndexOutOfRange(f"locker {locker} outside 1..{self.b}")
        return self._occupant[locker - 1]

    def empty_lockers(self) -> list[int]:
        return [x for x, lab in enumerate(self._occupant, start=1) if lab is None]

    def as_permutation(self) -> Permutation:
        if self.b != self.n:
            raise ValueError("placement with empty lockers is not a permutation")
        return Permutation(self._slot)

    def __eq__(self, other):
        return (isinstance(other, Placement) and self.b == other.b
                and self._slot == other._slot)

    def __hash__(self):
        return hash((self.b, self._slot))

    def __repr__(self):
        return f"Placement({self._slot}, b={self.b})"


@dataclass(frozen=True)
class Colouring:
    colours: tuple

    def __post_init__(self):
        bad = [c for c in self.colours if c not in COLOURS]
        if bad or not self.colours:
            raise ValueError(f"colours must be non-empty red/blue values, got {bad}")

    def __call__(self, label: int) -> str:
        return self.colours[label - 1]

    def __len__(self):
        return len(self.colours)


@dataclass(frozen=True)
class GameConfig:
    """One game: ``n`` players, ``b`` lockers, ``budget`` queries per player."""

    n: int
    b: Optional[int] = None
    budget: Optional[int] = None
    variant: str = "standard"
    oracle: str = "strong"
    referee: str = "uniform"
    colouring: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.n is None or self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}", "n")
        if self.b is None:
            object.__setattr__(self, "b", self.n)
        if self.b < self.n:
            raise ConfigError(f"b must be >= n (b={self.b}, n={self.n})", "b")
        if self.budget is None:
            object.__setattr__(self, "budget", self.b // 2)
        if self.budget < 0:
            raise ConfigError(f"budget must be >= 0, got {self.budget}", "budget")
        for name, allowed in (("variant", VARIANTS), ("oracle", ORACLES),
                              ("referee", REFEREES), ("colouring", COLOUR_MODES)):
            if getattr(self, name) not in allowed:
                raise ConfigError(
                    f"{name} must be one of {', '.join(allowed)}; got {getattr(self, name)!r}",
                    name)
        if self.oracle == "colour" and self.variant != "coloured-slips":
            raise ConfigError("the colour oracle requires the coloured-slips variant", "oracle")
        if self.variant == "standard" and self.b != self.n:
            raise ConfigError("the standard variant needs b == n; use empty-lockers", "variant")
        if self.referee == "cheating":
            if self.b != self.n:
                raise ConfigError("the cheating referee needs b == n", "referee")
            if self.n % 2 or self.n < 4:
                raise ConfigError("the cheating referee needs an even n >= 4", "referee")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits", "seed")


@dataclass(frozen=True)
class TeamOutcome:
    per_player_win: tuple
    per_player_queries: tuple
    team_win: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "per_player_win", tuple(bool(w) for w in self.per_player_win))
        object.__setattr__(self, "per_player_queries", tuple(int(q) for q in self.per_player_queries))
        if len(self.per_player_win) != len(self.per_player_queries):
            raise ValueError("win flags and query counts differ in length")
        object.__setattr__(self, "team_win", all(self.per_player_win))

    @property
    def total_queries(self) -> int:
        return sum(self.per_player_queries)
