"""scikit-learn style wrappers around the solver and the game engine.

Hyperparameters go to the constructor and are exposed through
``get_params``/``set_params``; the problem instance goes to ``fit`` and
results are stored in trailing-underscore attributes.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .domain import Schedule, TimeGrid
from .game import EquilibriumReport, GameState, run_to_equilibrium
from .nsga2 import Chromosome, Scale, SolverConfig, evolve, select_strategy
from .objectives import Player
from .pricing import CostCoefficients
from .validation import check_fitted, check_profile


class _SolverParams(BaseEstimator):
    def _solver_config(self) -> SolverConfig:
        return SolverConfig(
            population_size=self.population_size,
            generations=self.generations,
            crossover_rate=self.crossover_rate,
            mutation_rate=self.mutation_rate,
            tournament_size=self.tournament_size,
            rng_seed=self.random_state,
            selection_weights=(self.w_cost, self.w_discomfort),
        )

    def _grid(self) -> TimeGrid:
        return TimeGrid(self.slots_per_day)

    def _coeffs(self) -> CostCoefficients:
        return self.coeffs if self.coeffs is not None else CostCoefficients.from_tou(grid=self._grid())


class NSGA2Scheduler(_SolverParams):
    """Pareto-optimal schedules for one player against a fixed background load.

    Attributes set by ``fit``: ``front_`` (a :class:`ParetoFront`), ``best_``
    (the selected :class:`Chromosome`), ``schedule_`` and ``scale_``.
    """

    def __init__(
        self,
        population_size=100,
        generations=200,
        crossover_rate=0.9,
        mutation_rate=None,
        tournament_size=2,
        w_cost=0.5,
        w_discomfort=0.5,
        coeffs=None,
        slots_per_day=48,
        random_state=0,
    ):
        self.population_size = population_size
        self.generations = generations
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.tournament_size = tournament_size
        self.w_cost = w_cost
        self.w_discomfort = w_discomfort
        self.coeffs = coeffs
        self.slots_per_day = slots_per_day
        self.random_state = random_state

    def fit(self, player: Player, others_load=None, incumbent=None):
        grid = self._grid()
        if others_load is None:
            others_load = np.zeros(grid.slots_per_day)
        others_load = check_profile(others_load, grid.slots_per_day, "others_load")
        cfg = self._solver_config()
        self.front_ = evolve(player, others_load, self._coeffs(), grid, cfg, incumbent=incumbent)
        self.scale_ = Scale.of(self.front_.objectives())
        self.best_ = select_strategy(self.front_, cfg.selection_weights)
        self.schedule_ = self.best_.schedule(player)
        self.player_ = player
        return self

    def predict(self, player: Player | None = None) -> Schedule:
        """Selected schedule of the fitted player."""
        check_fitted(self, "best_")
        return self.schedule_

    def select(self, w_cost: float, w_discomfort: float) -> Chromosome:
        """Re-select from the fitted front with other weights."""
        check_fitted(self, "front_")
        return select_strategy(self.front_, (w_cost, w_discomfort))


class DemandResponseGame(_SolverParams):
    """Best-response dynamics over a population of players.

    Attributes set by ``fit``: ``state_`` (:class:`GameState`), ``report_``
    (:class:`EquilibriumReport`), ``schedules_``, ``load_`` and ``price_``.
    """

    def __init__(
        self,
        w_cost=0.5,
        w_discomfort=0.5,
        max_rounds=20,
        epsilon=1e-6,
        verify_samples=1000,
        population_size=100,
        generations=200,
        crossover_rate=0.9,
        mutation_rate=None,
        tournament_size=2,
        coeffs=None,
        slots_per_day=48,
        random_state=0,
    ):
        self.w_cost = w_cost
        self.w_discomfort = w_discomfort
        self.max_rounds = max_rounds
        self.epsilon = epsilon
        self.verify_samples = verify_samples
        self.population_size = population_size
        self.generations = generations
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.tournament_size = tournament_size
        self.coeffs = coeffs
        self.slots_per_day = slots_per_day
        self.random_state = random_state

    def fit(self, players: Sequence[Player], order=None):
        state = GameState.initial(list(players), self._coeffs(), self._grid())
        self.report_: EquilibriumReport = run_to_equilibrium(
            state,
            max_rounds=self.max_rounds,
            epsilon=self.epsilon,
            cfg=self._solver_config(),
            order=order,
            verify_samples=self.verify_samples,
        )
        self.state_ = state
        self.schedules_ = [s.schedule(p) for s, p in zip(state.strategies, state.players)]
        self.load_ = state.load()
        self.price_ = state.price.copy()
        self.converged_ = state.converged
        return self

    def predict(self, players: Sequence[Player] | None = None) -> list[Schedule]:
        """Equilibrium schedule of every fitted player."""
        check_fitted(self, "state_")
        return self.schedules_

    def score(self, players: Sequence[Player] | None = None) -> float:
        """Negated largest sampled deviation gain (0 is a certified equilibrium)."""
        check_fitted(self, "report_")
        gain = self.report_.max_deviation_gain
        return 0.0 - (gain if gain is not None else float("nan"))
