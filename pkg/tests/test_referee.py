import itertools
import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chi2

from quantum_lockers.classical import StrategyKind, play_team, pointer_player
from quantum_lockers.errors import BudgetExceeded, ConfigError, IndexOutOfRange, InvalidN
from quantum_lockers.model import (BLUE, RED, Colouring, GameConfig, Permutation, Placement,
                                   cycle_of, longest_cycle)
from quantum_lockers.referee import (QuerySession, colour_query, plant_long_cycle,
                                     sample_colouring, sample_permutation, sample_placement,
                                     strong_query, trial_seed, weak_query)


def test_single_player_permutation():
    assert sample_permutation(1, 0) == Permutation((1,))
    with pytest.raises(InvalidN):
        sample_permutation(0, 0)


def test_two_permutations_equally_likely():
    T = 100_000
    ident = sum(sample_permutation(2, trial_seed(1, i)) == Permutation((1, 2)) for i in range(T))
    assert abs(ident / T - 0.5) < 0.01


def test_longest_cycle_distribution_n6():
    counts = Counter(longest_cycle(Permutation(p)) for p in itertools.permutations(range(1, 7)))
    T = 60_000
    seen = Counter(longest_cycle(sample_permutation(6, trial_seed(2, i))) for i in range(T))
    stat = sum((seen[k] - T * c / 720) ** 2 / (T * c / 720) for k, c in counts.items())
    assert stat < chi2.ppf(0.999, len(counts) - 1)


def test_square_placement_is_the_sampled_permutation():
    for i in range(50):
        assert sample_placement(7, 7, trial_seed(3, i)).slots == \
            sample_permutation(7, trial_seed(3, i)).mapping


def test_one_label_two_lockers():
    T = 100_000
    first = sum(sample_placement(1, 2, trial_seed(4, i)).slot(1) == 1 for i in range(T))
    assert abs(first / T - 0.5) < 0.01


def test_injections_of_two_labels_into_three_lockers():
    T = 100_000
    seen = Counter(sample_placement(2, 3, trial_seed(5, i)).slots for i in range(T))
    assert set(seen) == set(itertools.permutations((1, 2, 3), 2))
    assert all(abs(c / T - 1 / 6) < 0.01 for c in seen.values())


def test_placement_rejects_more_labels_than_lockers():
    with pytest.raises(InvalidN):
        sample_placement(3, 2, 0)


def test_oracle_examples():
    pl = Placement((2, 3, 1))  # locker 1 holds label 3, locker 2 label 1, locker 3 label 2
    s = QuerySession(pl, 1, 3)
    assert weak_query(s, 2) == 1
    assert weak_query(s, 1) == 0
    assert strong_query(s, 3) == 2
    assert s.used == 3 and s.remaining == 0
    with pytest.raises(BudgetExceeded):
        strong_query(s, 1)
    assert s.transcript == [(2, 1), (1, 0), (3, 2)]


def test_strong_oracle_on_an_empty_locker():
    s = QuerySession(Placement((3,), b=4), 1, 2)
    assert s.strong(1) is None
    assert s.strong(3) == 1


def test_out_of_range_locker():
    s = QuerySession(Placement((1, 2)), 1, 2)
    with pytest.raises(IndexOutOfRange):
        s.weak(3)
    with pytest.raises(IndexOutOfRange):
        s.strong(0)


def test_colour_oracle():
    pl = Placement((1, 2))
    colouring = Colouring((RED, BLUE))
    assert colour_query(QuerySession(pl, 1, 1, colouring), 1) == 1
    assert colour_query(QuerySession(pl, 2, 1, colouring), 2) == 0
    assert colour_query(QuerySession(pl, 1, 1, colouring), 2) == 0
    with pytest.raises(ConfigError):
        QuerySession(pl, 1, 1).colour(1)


def test_colouring_modes():
    assert set(sample_colouring(5, "all-red", 0).colours) == {RED}
    assert set(sample_colouring(5, "all-blue", 0).colours) == {BLUE}
    reds = sum(c == RED for i in range(200) for c in sample_colouring(50, "random", i).colours)
    assert abs(reds / 10_000 - 0.5) < 0.03


@given(st.integers(1, 12), st.integers(0, 12), st.lists(st.integers(1, 12), max_size=30),
       st.integers(0, 2**32))
def test_budget_is_never_exceeded(n, budget, calls, seed):
    pl = sample_placement(n, n, seed)
    s = QuerySession(pl, 1, budget)
    answered = 0
    for x in calls:
        x = (x - 1) % n + 1
        if answered < budget:
            s.strong(x)
            answered += 1
        else:
            with pytest.raises(BudgetExceeded):
                s.strong(x)
    assert s.used == answered <= budget


@given(st.integers(1, 10), st.integers(0, 2**32))
def test_weak_agrees_with_strong(n, seed):
    pl = sample_placement(n, n + 2, seed)
    for player in range(1, n + 1):
        weak = QuerySession(pl, player, n + 2)
        strong = QuerySession(pl, player, n + 2)
        for x in range(1, n + 3):
            assert weak.weak(x) == int(strong.strong(x) == player)


@pytest.mark.parametrize("n", [8, 20, 100])
def test_cheating_referee_plants_a_long_cycle(n):
    s = n // 2 + 2
    for i in range(1000 if n < 100 else 200):
        sigma, planted = plant_long_cycle(n, trial_seed(6, i))
        assert len(planted) == s
        assert sigma(planted[0]) == planted[-1]
        assert all(sigma(planted[j + 1]) == planted[j] for j in range(s - 1))
        assert set(cycle_of(sigma, planted[0])) == set(planted)
        assert longest_cycle(sigma) >= s


def test_four_players_get_a_single_cycle():
    for i in range(200):
        assert longest_cycle(plant_long_cycle(4, trial_seed(7, i))[0]) == 4


@pytest.mark.parametrize("n", [3, 2, 7])
def test_cheating_referee_needs_even_n(n):
    with pytest.raises(InvalidN):
        plant_long_cycle(n, 0)


def test_pointer_walk_through_the_planted_cycle():
    n = 100
    s = n // 2 + 2
    sigma, planted = plant_long_cycle(n, 8)
    session = QuerySession(Placement.from_permutation(sigma), planted[0], n // 2)
    assert pointer_player(session) is None
    # locker i_j holds label i_{j+1}, so the walk opens i_1 .. i_{s-2} and stops short
    assert [x for x, _ in session.transcript] == list(planted[:s - 2])
    assert [label for _, label in session.transcript] == list(planted[1:s - 1])


def test_cheating_defeats_plain_pointer_following():
    cfg = GameConfig(n=20, referee="cheating")
    for i in range(200):
        sigma, _ = plant_long_cycle(20, trial_seed(9, i))
        out = play_team(Placement.from_permutation(sigma), cfg, StrategyKind("pointer"), i)
        assert not out.team_win
        assert sum(not w for w in out.per_player_win) >= 12


def test_guessing_after_the_walk_wins_about_two_in_n():
    # an unopened-locker guess by the first planted player: half the lockers remain
    n, T = 20, 20_000
    wins = 0
    for i in range(T):
        sigma, planted = plant_long_cycle(n, trial_seed(10, i))
        s = QuerySession(Placement.from_permutation(sigma), planted[0], n // 2)
        wins += pointer_player(s, "uniform", trial_seed(11, i)) == sigma(planted[0])
    p = 2 / n
    assert abs(wins / T - p) <= 3 * math.sqrt(p * (1 - p) / T)
