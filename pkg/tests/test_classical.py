import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from quantum_lockers.analytics import pointer_success_exact, reveal_game_exact, weak_sequential_exact
from quantum_lockers.classical import (StrategyKind, naive_player, play_team, pointer_player,
                                       reveal_game_trace, run_team_game, sequential_reveal_game,
                                       shuffled_pointer_player, weak_sequential_game,
                                       weak_sequential_trace)
from quantum_lockers.errors import ConfigError, EmptyLockerEncountered
from quantum_lockers.model import (GameConfig, Permutation, Placement, invert, longest_cycle)
from quantum_lockers.montecarlo import check_strategy, play_trial
from quantum_lockers.referee import QuerySession, trial_seed


def within_3sigma(wins, trials, p):
    p = float(p)
    return abs(wins / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


# -- independent exhaustive oracles ---------------------------------------

def reveal_oracle(N):
    """Probability of the reveal game by enumerating every placement and every choice."""
    n = N * N
    total = Fraction(0)
    perms = list(itertools.permutations(range(1, n + 1)))
    for perm in perms:
        occupant = {perm[i]: i + 1 for i in range(n)}

        def play(lockers, players):
            if not players:
                return Fraction(1)
            player = min(players)
            subsets = list(itertools.combinations(lockers, N))
            good = Fraction(0)
            for opened in subsets:
                seen = {occupant[x] for x in opened}
                if player in seen:
                    good += play([x for x in lockers if x not in opened], players - seen)
            return good / len(subsets)

        total += play(list(range(1, n + 1)), frozenset(range(1, n + 1)))
    return total / len(perms)


def weak_sequential_oracle(t):
    n = 2 * t
    total = Fraction(0)
    perms = list(itertools.permutations(range(1, n + 1)))
    for perm in perms:
        def play(player, lockers):
            if player > n:
                return Fraction(1)
            subsets = list(itertools.combinations(lockers, min(t, len(lockers))))
            good = Fraction(0)
            for opened in subsets:
                if perm[player - 1] in opened:
                    good += play(player + 1, [x for x in lockers if x != perm[player - 1]])
            return good / len(subsets)

        total += play(1, list(range(1, n + 1)))
    return total / len(perms)


# -- naive ----------------------------------------------------------------

def test_naive_with_full_budget_always_wins():
    for i in range(100):
        out = run_team_game(GameConfig(n=5, budget=5), StrategyKind("naive"), trial_seed(1, i))
        assert out.team_win


def test_naive_single_player_half():
    T = 20_000
    wins = sum(run_team_game(GameConfig(n=2, budget=1), StrategyKind("naive"),
                             trial_seed(2, i)).per_player_win[0] for i in range(T))
    assert within_3sigma(wins, T, Fraction(1, 2))


def test_naive_team_sixteenth_through_sessions():
    T = 20_000
    wins = sum(run_team_game(GameConfig(n=4, budget=2), StrategyKind("naive"),
                             trial_seed(3, i)).team_win for i in range(T))
    assert within_3sigma(wins, T, Fraction(1, 16))


def test_naive_opens_distinct_lockers_and_stops_when_found():
    pl = Placement((4, 1, 2, 3))
    for i in range(200):
        s = QuerySession(pl, 1, 3)
        guess = naive_player(s, trial_seed(4, i))
        opened = [x for x, _ in s.transcript]
        assert len(set(opened)) == len(opened) <= 3
        if guess is not None:
            assert guess == 4 and opened[-1] == 4


# -- pointer following -----------------------------------------------------

def test_pointer_on_identity_uses_one_query_each():
    out = play_team(Placement.from_permutation(Permutation.identity(6)), GameConfig(n=6),
                    StrategyKind("pointer"), 0)
    assert out.team_win and out.per_player_queries == (1,) * 6


def test_pointer_on_a_full_cycle_loses_everyone():
    out = play_team(Placement((2, 3, 4, 1)), GameConfig(n=4), StrategyKind("pointer"), 0)
    assert out.per_player_win == (False,) * 4


def test_pointer_two_players_is_half():
    wins = [play_team(Placement(p), GameConfig(n=2, budget=1), StrategyKind("pointer"), 0).team_win
            for p in itertools.permutations((1, 2))]
    assert Fraction(sum(wins), len(wins)) == Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_pointer_wins_iff_no_long_cycle(n):
    for perm in itertools.permutations(range(1, n + 1)):
        pl = Placement(perm)
        L = longest_cycle(pl.as_permutation())
        for budget in range(0, n + 1):
            out = play_team(pl, GameConfig(n=n, budget=budget), StrategyKind("pointer"), 0)
            assert out.team_win == (L <= budget)


@pytest.mark.parametrize("n", [7, 8])
def test_pointer_wins_iff_no_long_cycle_half_budget(n):
    cfg = GameConfig(n=n, budget=n // 2)
    for perm in itertools.permutations(range(1, n + 1)):
        pl = Placement(perm)
        out = play_team(pl, cfg, StrategyKind("pointer"), 0)
        assert out.team_win == (longest_cycle(pl.as_permutation()) <= n // 2)


def test_pointer_player_never_overspends():
    for i in range(300):
        s = QuerySession(Placement(np.random.default_rng(i).permutation(12) + 1), 1 + i % 12, 6)
        pointer_player(s)
        assert s.used <= 6


def test_pointer_with_empty_locker_is_reported():
    # player 1 starts at locker 1, which is empty
    s = QuerySession(Placement((2,), b=3), 1, 2)
    with pytest.raises(EmptyLockerEncountered):
        pointer_player(s)


def test_last_pointer_wins_one_step_past_the_budget():
    # a single cycle of length n/2 + 1 plus fixed points: the last label seen is the answer
    n = 10
    cyc = list(range(1, n // 2 + 2))
    sigma = list(range(1, n + 1))
    for k, x in enumerate(cyc):
        sigma[x - 1] = cyc[k - 1]
    pl = Placement(sigma)
    assert longest_cycle(pl.as_permutation()) == n // 2 + 1
    cfg = GameConfig(n=n)
    assert not play_team(pl, cfg, StrategyKind("pointer"), 0).team_win
    assert play_team(pl, cfg, StrategyKind("pointer", "last-pointer"), 0).team_win


# -- shuffled pointer --------------------------------------------------------

def test_identity_shuffle_replays_plain_pointer():
    for i in range(100):
        pl = Placement(np.random.default_rng(i).permutation(9) + 1)
        for player in range(1, 10):
            a = QuerySession(pl, player, 4)
            b = QuerySession(pl, player, 4)
            assert pointer_player(a) == shuffled_pointer_player(b, Permutation.identity(9))
            assert a.transcript == b.transcript


@pytest.mark.parametrize("n", range(1, 6))
def test_shuffle_makes_the_effective_walk_uniform(n):
    # for any fixed placement, each permutation arises from exactly one relabelling
    sigma = Permutation([(i % n) + 1 for i in range(1, n + 1)])
    effective = []
    for tau in itertools.permutations(range(1, n + 1)):
        tau = Permutation(tau)
        effective.append(invert(tau).compose(sigma))
    assert sorted(p.mapping for p in effective) == sorted(itertools.permutations(range(1, n + 1)))


@pytest.mark.parametrize("n", range(2, 7))
def test_shuffled_pointer_enumerated_over_relabellings(n):
    # fixed adversarial placement; exact success over all secret relabellings
    cyc = Placement([(i % n) + 1 for i in range(1, n + 1)])
    cfg = GameConfig(n=n)
    wins = sum(play_team(cyc, cfg, StrategyKind("shuffled-pointer", shared=Permutation(t)), 0).team_win
               for t in itertools.permutations(range(1, n + 1)))
    assert Fraction(wins, math.factorial(n)) == pointer_success_exact(n, n // 2)


def test_conjugating_relabelling_would_keep_the_cycle_type():
    sigma = Permutation((2, 3, 4, 5, 1, 6))
    for t in itertools.permutations(range(1, 7)):
        t = Permutation(t)
        assert longest_cycle(t.compose(sigma).compose(invert(t))) == 5


def test_shuffled_pointer_against_cheating_referee():
    T = 20_000
    cfg = GameConfig(n=20, referee="cheating")
    kind = check_strategy(cfg, "shuffled-pointer")
    wins = sum(play_trial(cfg, "shuffled-pointer", kind, trial_seed(6, i)).win for i in range(T))
    assert within_3sigma(wins, T, pointer_success_exact(20, 10))


def test_plain_pointer_against_cheating_referee_always_loses():
    cfg = GameConfig(n=20, referee="cheating")
    kind = check_strategy(cfg, "pointer")
    assert not any(play_trial(cfg, "pointer", kind, trial_seed(7, i)).win for i in range(2000))


# -- fast kernels agree with the session path ----------------------------------

@pytest.mark.parametrize("strategy, referee", [("pointer", "uniform"), ("shuffled-pointer", "uniform"),
                                               ("pointer", "cheating"),
                                               ("shuffled-pointer", "cheating")])
def test_kernel_matches_session_game(strategy, referee):
    cfg = GameConfig(n=12, budget=6, referee=referee)
    kind = check_strategy(cfg, strategy)
    for i in range(300):
        seed = trial_seed(8, i)
        slow = run_team_game(cfg, kind, seed)
        fast = play_trial(cfg, strategy, kind, seed)
        assert fast.win == slow.team_win
        assert fast.queries == slow.total_queries


def test_naive_kernel_matches_in_distribution():
    cfg = GameConfig(n=3, b=3, budget=2)
    kind = check_strategy(cfg, "naive")
    T = 20_000
    fast = sum(play_trial(cfg, "naive", kind, trial_seed(9, i)).win for i in range(T))
    assert within_3sigma(fast, T, Fraction(8, 27))


def test_uniform_fallback_helps_the_naive_player():
    cfg = GameConfig(n=1, b=4, budget=2, variant="empty-lockers")
    T = 20_000
    wins = sum(run_team_game(cfg, StrategyKind("naive", "uniform"), trial_seed(10, i)).team_win
               for i in range(T))
    assert within_3sigma(wins, T, Fraction(1, 2) + Fraction(1, 2) * Fraction(1, 2))


def test_run_team_game_is_deterministic():
    cfg = GameConfig(n=10, seed=42)
    kind = StrategyKind("naive", "uniform")
    assert run_team_game(cfg, kind) == run_team_game(cfg, kind)


@pytest.mark.parametrize("cfg, strategy", [
    (GameConfig(n=4, oracle="weak"), "pointer"),
    (GameConfig(n=4, b=6, variant="empty-lockers"), "pointer"),
])
def test_incompatible_strategy_is_a_config_error(cfg, strategy):
    with pytest.raises(ConfigError):
        check_strategy(cfg, strategy)


def test_strategy_kind_validation():
    with pytest.raises(ConfigError):
        StrategyKind("bogus")
    with pytest.raises(ConfigError):
        StrategyKind("naive", "last-pointer")
    assert StrategyKind("pointer", "none").fallback is None


# -- the two sequential analysis games -----------------------------------

def test_reveal_game_single_player():
    assert all(sequential_reveal_game(1, i) for i in range(20))


def test_reveal_game_matches_enumeration_n2():
    assert reveal_oracle(2) == reveal_game_exact(2) == Fraction(1, 2)


def test_reveal_game_frequency_n2():
    T = 20_000
    wins = sum(sequential_reveal_game(2, trial_seed(11, i)) for i in range(T))
    assert within_3sigma(wins, T, Fraction(1, 2))


def test_reveal_game_opens_n_lockers_per_round():
    for i in range(200):
        win, opened = reveal_game_trace(3, trial_seed(12, i))
        assert opened % 3 == 0 and (not win or opened == 9)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_weak_sequential_matches_enumeration(t):
    assert weak_sequential_oracle(t) == weak_sequential_exact(t)


def test_weak_sequential_examples():
    assert weak_sequential_exact(1) == Fraction(1, 2)
    assert weak_sequential_exact(2) == Fraction(1, 3)
    T = 20_000
    wins = sum(weak_sequential_game(2, trial_seed(13, i)) for i in range(T))
    assert within_3sigma(wins, T, Fraction(1, 3))


def test_weak_sequential_respects_budget():
    for i in range(200):
        win, used = weak_sequential_trace(3, trial_seed(14, i))
        assert used <= 6 * 3
