"""Closed forms, bounds and the exhaustive enumeration oracle.

Probabilities are exact ``Fraction`` values wherever the inputs allow.  The
only floating-point quantities are ln 2, e and π; those use mpmath at
``DIGITS`` significant digits (or plain floats where a float is the point,
as for the Stirling approximation).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .classical import StrategyKind, pointer_player, shuffled_pointer_player
from .errors import ConfigError, InvalidN, TooLarge
from .model import Placement
from .quantum import plan_exact_grover
from .referee import QuerySession

DIGITS = 30
# past this n the rational sum gets slow; switch to harmonic numbers in mpmath
EXACT_SUM_LIMIT = 4000
ENUMERATION_LIMIT = 8


@dataclass(frozen=True)
class ExactResult:
    value: object
    formula_id: str
    parameters: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return isinstance(self.value, (Fraction, int))

    def __float__(self):
        return float(self.value)

    def as_text(self, digits: int = 15) -> str:
        if isinstance(self.value, Fraction):
            return f"{self.value} ≈ {mpmath.nstr(mpmath.mpf(self.value.numerator) / self.value.denominator, digits)}"
        return mpmath.nstr(mpmath.mpf(self.value), digits)


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def pointer_failure_exact(n: int):
    """Probability that a uniform permutation of n has a cycle longer than n/2.

    Exact ``Fraction`` for n up to ``EXACT_SUM_LIMIT``, an mpmath value
    with ``DIGITS`` digits beyond that.
    """
    if n < 2 or n % 2:
        raise InvalidN(f"n must be even and >= 2, got {n}")
    h = n // 2
    if n <= EXACT_SUM_LIMIT:
        return sum((Fraction(1, h + k) for k in range(1, h + 1)), Fraction(0))
    with mpmath.workdps(DIGITS + 10):
        value = mpmath.harmonic(n) - mpmath.harmonic(h)
    return value


def pointer_success_exact(n: int, budget: int) -> Fraction:
    """Probability that every cycle of a uniform permutation of n has length ≤ budget.

    Uses a(m) = (1/m)·Σ_{k=1}^{min(budget, m)} a(m-k), a(0) = 1, which conditions on
    the length of the cycle through the largest element.
    """
    if n < 1 or budget < 0:
        raise InvalidN(f"need n >= 1 and budget >= 0, got n={n}, budget={budget}")
    a = [Fraction(1)]
    for m in range(1, n + 1):
        a.append(sum(a[m - k] for k in range(1, min(budget, m) + 1)) / m)
    return a[n]


def pointer_success_limit():
    """1 - ln 2 at ``DIGITS`` digits."""
    with mpmath.workdps(DIGITS):
        value = 1 - mpmath.log(2)
    if round(float(value), 5) != 0.30685:
        raise AssertionError(f"1 - ln 2 = {value} does not round to 0.30685")
    return value


def theorem1_bound(n: int) -> Fraction:
    """1/⌊√n⌋!, the classical ceiling with ⌊√n⌋ openings per player."""
    if n < 1:
        raise InvalidN(f"n must be >= 1, got {n}")
    return Fraction(1, math.factorial(math.isqrt(n)))


def reveal_game_exact(N: int) -> Fraction:
    if N < 1:
        raise InvalidN(f"N must be >= 1, got {N}")
    return Fraction(1, math.factorial(N))


def weak_sequential_exact(t: int) -> Fraction:
    """t^t·t!/(2t)!, checked against the product of per-player chances t/(2t-j)."""
    if t < 1:
        raise InvalidN(f"t must be >= 1, got {t}")
    closed = Fraction(t**t * math.factorial(t), math.factorial(2 * t))
    product = math.prod((Fraction(t, 2 * t - j) for j in range(t)), start=Fraction(1))
    if closed != product:
        raise AssertionError(f"closed form {closed} != product {product}")
    return closed


def weak_sequential_stirling(t: int) -> float:
    if t < 1:
        raise InvalidN(f"t must be >= 1, got {t}")
    return (math.e / 4) ** t / math.sqrt(2)


def naive_team_exact(n: int, b: int, budget: int) -> Fraction:
    """Each player independently finds his label with chance min(budget, b)/b."""
    return Fraction(min(budget, b), b) ** n


def grover_query_budget(b: int) -> int:
    if b < 1:
        raise InvalidN(f"b must be >= 1, got {b}")
    budget = math.ceil(math.pi / 4 * math.sqrt(b))
    if budget < plan_exact_grover(b).iterations - 1:
        raise AssertionError(f"π/4·√b budget {budget} undercuts the exact plan at b={b}")
    return budget


def brute_force_team_success(n: int, budget: int, kind: StrategyKind) -> Fraction:
    """Exact team success by replaying a deterministic strategy on all n! placements."""
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration is capped at n={ENUMERATION_LIMIT}, got {n}")
    if n < 1:
        raise InvalidN(f"n must be >= 1, got {n}")
    if kind.name == "naive" or kind.fallback == "uniform":
        raise ConfigError("only deterministic strategies can be enumerated", "strategy")
    if kind.name == "shuffled-pointer" and kind.shared is None:
        raise ConfigError("enumeration of shuffled-pointer needs a fixed shared permutation",
                          "strategy")
    wins = 0
    total = 0
    for perm in itertools.permutations(range(1, n + 1)):
        placement = Placement(perm, n)
        total += 1
        for i in range(1, n + 1):
            s = QuerySession(placement, i, budget)
            if kind.name == "pointer":
                guess = pointer_player(s, kind.fallback)
            else:
                guess = shuffled_pointer_player(s, kind.shared, kind.fallback)
            if guess != perm[i - 1]:
                break
        else:
            wins += 1
    return Fraction(wins, total)


@lru_cache(maxsize=None)
def _formulas():
    return {
        "pointer-failure": (pointer_failure_exact, ("n",)),
        "pointer-success": (pointer_success_exact, ("n", "budget")),
        "pointer-limit": (pointer_success_limit, ()),
        "theorem1-bound": (theorem1_bound, ("n",)),
        "reveal-game": (reveal_game_exact, ("N",)),
        "weak-sequential": (weak_sequential_exact, ("t",)),
        "weak-stirling": (weak_sequential_stirling, ("t",)),
        "naive-team": (naive_team_exact, ("n", "b", "budget")),
        "grover-budget": (grover_query_budget, ("b",)),
    }


FORMULA_IDS = tuple(_formulas())


def evaluate(formula_id: str, **params) -> ExactResult:
    """Evaluate a named closed form with keyword parameters."""
    try:
        fn, names = _formulas()[formula_id]
    except KeyError:
        raise ConfigError(f"unknown formula {formula_id!r}; choose from {', '.join(FORMULA_IDS)}",
                          "formula") from None
    missing = [k for k in names if params.get(k) is None]
    if missing:
        raise ConfigError(f"formula {formula_id} needs {', '.join(missing)}", missing[0])
    args = {k: params[k] for k in names}
    return ExactResult(fn(*args.values()), formula_id, args)
