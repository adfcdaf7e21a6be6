"""Dense statevector amplitude amplification over the b lockers.

The register has exactly ``b`` basis states, one per locker, so no padding to
a power of two is needed: the oracle is a phase on one amplitude and the
diffusion is a phase about the uniform superposition.  Certainty comes from
phase matching: with ``J`` iterations and equal oracle and diffusion phases
``φ = 2·arcsin(sin(π/(4J+2)) / sin θ)``, the final state is exactly the
marked basis state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import ConfigError, IndexOutOfRange, TooLarge
from .model import BLUE, RED, Colouring, GameConfig, Placement, TeamOutcome
from .referee import QuerySession, child_seed, make_rng, referee_setup

MAX_LOCKERS = 2**20
NORM_TOL = 1e-12
CERTAINTY_TOL = 1e-9


@dataclass(frozen=True)
class GroverPlan:
    b: int
    theta: float
    iterations: int
    oracle_phase: float
    diffusion_phase: float

    @property
    def predicted_success(self) -> float:
        """sin²((2J+1)θ): exact for the standard π/π plan, ≤ 1 in general."""
        return math.sin((2 * self.iterations + 1) * self.theta) ** 2


def _check_size(b):
    if b < 1:
        raise ConfigError(f"b must be >= 1, got {b}", "b")
    if b > MAX_LOCKERS:
        raise TooLarge(f"b={b} exceeds the dense simulation cap of {MAX_LOCKERS}")


def uniform_state(b: int) -> np.ndarray:
    _check_size(b)
    return np.full(b, 1 / math.sqrt(b), dtype=np.complex128)


def norm(state: np.ndarray) -> float:
    return float(np.sqrt(np.vdot(state, state).real))


def generalized_grover_iterate(state: np.ndarray, marked: Optional[int],
                               phi: float, psi: float) -> np.ndarray:
    """``(I - (1 - e^{iψ}) P_u) · S_φ`` applied to ``state``; returns a new array.

    ``S_φ`` multiplies the marked amplitude (1-based) by ``e^{iφ}``;
    ``marked=None`` makes it the identity.
    """
    out = np.array(state, dtype=np.complex128, copy=True)
    if marked is not None:
        if not 1 <= marked <= out.size:
            raise IndexOutOfRange(f"marked locker {marked} outside 1..{out.size}")
        out[marked - 1] *= np.exp(1j * phi)
    # P_u|s> = <u|s>|u>, and <u|s>|u> is the mean amplitude in every slot
    out -= (1 - np.exp(1j * psi)) * out.mean()
    return out


def standard_plan(b: int, iterations: int) -> GroverPlan:
    _check_size(b)
    return GroverPlan(b, math.asin(1 / math.sqrt(b)), iterations, math.pi, math.pi)


@lru_cache(maxsize=None)
def plan_exact_grover(b: int) -> GroverPlan:
    _check_size(b)
    theta = math.asin(1 / math.sqrt(b))
    if b == 1:
        return GroverPlan(1, theta, 0, 0.0, 0.0)
    # guard against (π/2 - θ)/(2θ) landing a hair above an integer
    J = math.ceil((math.pi / 2 - theta) / (2 * theta) - 1e-12)
    ratio = math.sin(math.pi / (4 * J + 2)) / math.sin(theta)
    # asin amplifies rounding near 1 (b = 4 would give π - 3e-8), so snap to the standard phase
    phase = math.pi if ratio >= 1 - 1e-12 else 2 * math.asin(ratio)
    return GroverPlan(b, theta, J, phase, phase)


def run_plan(plan: GroverPlan, marked: Optional[int]) -> np.ndarray:
    state = uniform_state(plan.b)
    for _ in range(plan.iterations):
        state = generalized_grover_iterate(state, marked, plan.oracle_phase, plan.diffusion_phase)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    p = np.abs(state) ** 2
    return p / p.sum()


def _sample(cdf: np.ndarray, seed) -> int:
    u = make_rng(seed).random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), cdf.size - 1) + 1


def measure(state: np.ndarray, seed) -> int:
    """Sample a 1-based locker index from the Born probabilities of ``state``."""
    return _sample(np.cumsum(np.abs(state) ** 2), seed)


def exact_grover_state(b: int, marked: Optional[int]) -> np.ndarray:
    return run_plan(plan_exact_grover(b), marked)


@lru_cache(maxsize=8192)
def _exact_cdf(b: int, marked: Optional[int]) -> np.ndarray:
    cdf = np.cumsum(np.abs(exact_grover_state(b, marked)) ** 2)
    cdf.flags.writeable = False
    return cdf


def exact_grover_search(b: int, marked: Optional[int], seed) -> tuple[int, int]:
    """Phase-matched search from the uniform state; returns (guess, queries).

    The final state depends only on (b, marked), so its measurement
    distribution is simulated once per pair and cached.
    """
    plan = plan_exact_grover(b)
    if marked is not None and not 1 <= marked <= b:
        raise IndexOutOfRange(f"marked locker {marked} outside 1..{b}")
    return _sample(_exact_cdf(b, marked), seed), plan.iterations


def standard_grover_probability(b: int, k: int) -> float:
    """sin²((2k+1)·arcsin(1/√b)), cross-checked against a statevector run."""
    if k < 0:
        raise ConfigError("iteration count must be >= 0", "k")
    plan = standard_plan(b, k)
    closed = plan.predicted_success
    simulated = float(abs(run_plan(plan, 1)[0]) ** 2)
    if abs(closed - simulated) > 1e-10:
        raise AssertionError(f"closed form {closed} disagrees with simulation {simulated}")
    return closed


def query_bound(b: int) -> int:
    """ceil(π / (4·arcsin(1/√b))) + 1, the most iterations an exact plan may use."""
    return math.ceil(math.pi / (4 * math.asin(1 / math.sqrt(b)))) + 1


def quantum_locker_player(placement: Placement, i: int, b: Optional[int] = None,
                          seed=0) -> tuple[int, int]:
    b = placement.b if b is None else b
    if b != placement.b:
        raise ConfigError(f"b={b} does not match the placement's {placement.b} lockers", "b")
    return exact_grover_search(b, placement.slot(i), seed)


def quantum_colour_player(placement: Placement, colouring: Colouring, i: int,
                          b: Optional[int] = None, seed=0) -> tuple[str, int]:
    """Search the colour oracle's marked set, then check the result once classically.

    A blue slip leaves the oracle identically zero, so the search output is
    arbitrary and the check answers 0.
    """
    b = placement.b if b is None else b
    marked = placement.slot(i) if colouring(i) == RED else None
    guess, queries = exact_grover_search(b, marked, seed)
    check = QuerySession(placement, i, 1, colouring)
    answer = RED if check.colour(guess) else BLUE
    return answer, queries + check.used


def total_query_census(n: int, b: Optional[int] = None) -> tuple[int, int]:
    b = n if b is None else b
    if not b >= n >= 1:
        raise ConfigError(f"need b >= n >= 1, got n={n}, b={b}", "b")
    per_player = plan_exact_grover(b).iterations
    total = n * per_player
    if b >= 16:
        ratio = total / (n * math.sqrt(b))
        if not 0.5 <= ratio <= 1.2:
            raise AssertionError(f"team total {total} is off the n·√b scale (ratio {ratio:.3f})")
    return per_player, total


def run_quantum_game(cfg: GameConfig, seed=None) -> TeamOutcome:
    """One game with quantum players; placement drawn as for the classical team."""
    if seed is None:
        seed = cfg.seed
    needed = plan_exact_grover(cfg.b).iterations
    if cfg.variant == "coloured-slips":
        needed += 1
    if needed > cfg.budget:
        raise ConfigError(
            f"budget {cfg.budget} is below the {needed} queries exact search needs at b={cfg.b}",
            "budget")
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    placement, colouring = referee_setup(cfg, make_rng(child_seed(seed, 0)))
    players_seed = child_seed(seed, 1)
    wins, queries = [], []
    for i in range(1, cfg.n + 1):
        s = child_seed(players_seed, i)
        if cfg.variant == "coloured-slips":
            answer, q = quantum_colour_player(placement, colouring, i, cfg.b, s)
            wins.append(answer == colouring(i))
        else:
            guess, q = quantum_locker_player(placement, i, cfg.b, s)
            wins.append(guess == placement.slot(i))
        queries.append(q)
    return TeamOutcome(tuple(wins), tuple(queries))
