"""Residential demand-response game: task scheduling, real-time pricing and
Nash equilibria found by per-player NSGA-II best responses."""

from .catalog import read_catalog
from .comfort import DiscomfortCoefficients, discomfort_cost, time_shift
from .config import ExperimentConfig, load_config
from .domain import Schedule, Task, TimeGrid, aggregate_load, feasible_starts, player_profile, task_profile, validate_task
from .estimators import DemandResponseGame, NSGA2Scheduler
from .game import GameState, best_response, energy_balance, run_to_equilibrium, verify_equilibrium
from .nsga2 import Chromosome, ParetoFront, SolverConfig, crowding_distance, evolve, non_dominated_sort, select_strategy
from .objectives import ObjectiveVector, Player, dominates, evaluate
from .pricing import CostCoefficients, GenerationProfile, consumer_energy_cost, prosumer_revenue, realtime_price, utility_cost
from .scenarios import ScenarioSpec, compare, generate_population, run_scenario

__version__ = "0.1.0"

__all__ = [
    "Chromosome",
    "CostCoefficients",
    "DemandResponseGame",
    "DiscomfortCoefficients",
    "ExperimentConfig",
    "GameState",
    "GenerationProfile",
    "NSGA2Scheduler",
    "ObjectiveVector",
    "ParetoFront",
    "Player",
    "ScenarioSpec",
    "Schedule",
    "SolverConfig",
    "Task",
    "TimeGrid",
    "aggregate_load",
    "best_response",
    "compare",
    "consumer_energy_cost",
    "crowding_distance",
    "discomfort_cost",
    "dominates",
    "energy_balance",
    "evaluate",
    "evolve",
    "feasible_starts",
    "generate_population",
    "load_config",
    "non_dominated_sort",
    "player_profile",
    "prosumer_revenue",
    "read_catalog",
    "realtime_price",
    "run_scenario",
    "run_to_equilibrium",
    "select_strategy",
    "task_profile",
    "time_shift",
    "utility_cost",
    "validate_task",
    "verify_equilibrium",
]
