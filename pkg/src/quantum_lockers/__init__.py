"""Classical and quantum strategies for the locker puzzle, with exact references."""

from .analytics import (brute_force_team_success, pointer_failure_exact, pointer_success_exact,
                        pointer_success_limit, theorem1_bound, weak_sequential_exact,
                        weak_sequential_stirling)
from .classical import (StrategyKind, naive_player, pointer_player, run_team_game,
                        sequential_reveal_game, shuffled_pointer_player, weak_sequential_game)
from .errors import (BudgetExceeded, ConfigError, EmptyLockerEncountered, IndexOutOfRange,
                     InvalidN, LockerError, TooLarge)
from .harness import ExperimentConfig, ExperimentReport, emit_report, run_experiment
from .model import (Colouring, GameConfig, Permutation, Placement, TeamOutcome,
                    cycle_decomposition, invert, longest_cycle)
from .quantum import (GroverPlan, exact_grover_search, generalized_grover_iterate,
                      plan_exact_grover, quantum_colour_player, quantum_locker_player,
                      run_quantum_game, standard_grover_probability, total_query_census)
from .referee import (QuerySession, cheating_permutation, colour_query, sample_permutation,
                      sample_placement, strong_query, weak_query)

__version__ = "0.1.0"

__all__ = [
    "brute_force_team_success",
    "BudgetExceeded",
    "cheating_permutation",
    "colour_query",
    "Colouring",
    "ConfigError",
    "cycle_decomposition",
    "emit_report",
    "EmptyLockerEncountered",
    "exact_grover_search",
    "ExperimentConfig",
    "ExperimentReport",
    "GameConfig",
    "generalized_grover_iterate",
    "GroverPlan",
    "IndexOutOfRange",
    "InvalidN",
    "invert",
    "LockerError",
    "longest_cycle",
    "naive_player",
    "Permutation",
    "Placement",
    "plan_exact_grover",
    "pointer_failure_exact",
    "pointer_player",
    "pointer_success_exact",
    "pointer_success_limit",
    "quantum_colour_player",
    "quantum_locker_player",
    "QuerySession",
    "run_experiment",
    "run_quantum_game",
    "run_team_game",
    "sample_permutation",
    "sample_placement",
    "sequential_reveal_game",
    "shuffled_pointer_player",
    "standard_grover_probability",
    "StrategyKind",
    "strong_query",
    "TeamOutcome",
    "theorem1_bound",
    "TooLarge",
    "total_query_census",
    "weak_query",
    "weak_sequential_exact",
    "weak_sequential_game",
    "weak_sequential_stirling",
]
