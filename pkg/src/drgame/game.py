"""Best-response dynamics, equilibrium verification and energy balance."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .domain import TimeGrid, aggregate_load
from .exceptions import InfeasibleSchedule
from .nsga2 import Chromosome, Scale, SolverConfig, evolve, select_strategy
from .objectives import ObjectiveVector, Player, PlayerProblem
from .pricing import CostCoefficients, realtime_price
from .validation import check_weights

log = logging.getLogger(__name__)


@dataclass
class GameState:
    """Strategy profile of every player and the price it induces.

    ``scales`` holds each player's normalisation bounds, fixed by its first
    best response so that the scalarised objective stays the same function
    across rounds.
    """

    players: list[Player]
    strategies: list[Chromosome]
    coeffs: CostCoefficients
    grid: TimeGrid
    price: np.ndarray = None
    round: int = 0
    converged: bool = False
    scales: list[Scale | None] = None
    problems: list[PlayerProblem] = field(default=None, repr=False)
    profiles: list[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.problems is None:
            self.problems = [PlayerProblem(p, self.grid) for p in self.players]
        if self.scales is None:
            self.scales = [None] * len(self.players)
        self.profiles = [
            prob.own_profiles(s.genes)[0] for prob, s in zip(self.problems, self.strategies)
        ]
        for prob, s in zip(self.problems, self.strategies):
            if not prob.is_feasible(s.genes).all():
                raise InfeasibleSchedule("initial strategy is infeasible")
        self.refresh_price()
        for i in range(len(self.players)):
            self.strategies[i].objectives = self.objectives(i)

    @classmethod
    def initial(cls, players: Sequence[Player], coeffs: CostCoefficients, grid: TimeGrid = TimeGrid(), start: str = "preferred") -> "GameState":
        """Every player starts from its all-preferred (or all-earliest) schedule."""
        problems = [PlayerProblem(p, grid) for p in players]
        pick = {"preferred": PlayerProblem.preferred_genes, "earliest": PlayerProblem.earliest_genes}[start]
        strategies = [Chromosome(pick(prob)) for prob in problems]
        return cls(list(players), strategies, coeffs, grid, problems=problems)

    @property
    def n_players(self) -> int:
        return len(self.players)

    def load(self) -> np.ndarray:
        return aggregate_load(self.profiles, self.grid)

    def others_load(self, i: int) -> np.ndarray:
        return aggregate_load(self.profiles[:i] + self.profiles[i + 1:], self.grid)

    def refresh_price(self) -> None:
        self.price = realtime_price(self.load(), self.coeffs)

    def objectives(self, i: int) -> ObjectiveVector:
        F = self.problems[i].evaluate_genes(self.strategies[i].genes, self.others_load(i), self.coeffs)
        return ObjectiveVector(float(F[0, 0]), float(F[0, 1]))

    def set_strategy(self, i: int, strategy: Chromosome) -> None:
        self.strategies[i] = strategy
        self.profiles[i] = self.problems[i].own_profiles(strategy.genes)[0]
        self.refresh_price()


@dataclass
class UpdateRecord:
    round: int
    player: int
    previous_score: float
    new_score: float
    changed: bool

    @property
    def improvement(self) -> float:
        return self.previous_score - self.new_score


@dataclass
class BalanceSheet:
    """Per-slot energy accounts kept as exact fractions."""

    demand: tuple[Fraction, ...]
    generation: tuple[Fraction, ...]
    utility: tuple[Fraction, ...]
    surplus: tuple[Fraction, ...]

    def residual(self) -> tuple[Fraction, ...]:
        return tuple(u + p - d - s for u, p, d, s in zip(self.utility, self.generation, self.demand, self.surplus))

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {name: np.array([float(x) for x in getattr(self, name)]) for name in ("demand", "generation", "utility", "surplus")}


@dataclass
class EquilibriumReport:
    rounds_used: int
    converged: bool
    objectives: list[ObjectiveVector]
    max_deviation_gain: float | None
    deviation_gains: np.ndarray | None
    balance: BalanceSheet
    updates: list[UpdateRecord] = field(default_factory=list)


def _player_rng(cfg: SolverConfig, round_: int, player: int) -> np.random.Generator:
    return np.random.default_rng([cfg.rng_seed, round_, player])


def _currency_factor(scale: Scale, weights) -> float:
    """Converts a scalarised score difference into currency-equivalent units.

    A unit of normalised cost is worth ``cost_range`` currency, and it enters
    the score with weight ``w_cost``. With a zero cost weight the score is
    already the only unit available and is returned unchanged.
    """
    w_cost = weights[0]
    return scale.cost_range / w_cost if w_cost > 0 else 1.0


def best_response(
    state: GameState,
    player_index: int,
    cfg: SolverConfig = SolverConfig(),
    weights=None,
) -> Chromosome:
    """Re-optimise one player against the others' frozen load.

    The incumbent strategy seeds the solver, so the returned strategy never
    scores worse than it. On the player's first call the front fixes its
    normalisation bounds in ``state.scales``.
    """
    i = player_index
    weights = check_weights(cfg.selection_weights if weights is None else weights)
    others = state.others_load(i)
    front = evolve(
        state.players[i],
        others,
        state.coeffs,
        state.grid,
        cfg,
        incumbent=state.strategies[i].genes,
        problem=state.problems[i],
        rng=_player_rng(cfg, state.round, i),
    )
    if state.scales[i] is None:
        state.scales[i] = Scale.of(front.objectives())
    return select_strategy(front, weights, state.scales[i])


def run_to_equilibrium(
    state: GameState,
    max_rounds: int = 20,
    epsilon: float = 1e-6,
    cfg: SolverConfig = SolverConfig(),
    weights=None,
    order: Sequence[int] | None = None,
    verify_samples: int = 0,
) -> EquilibriumReport:
    """Sequential round-robin best responses until no player gains.

    A round converges when no player changes its strategy or no player
    improves its scalarised objective by more than ``epsilon`` (measured in
    currency-equivalent units). The price is recomputed after every single
    update.
    """
    if max_rounds < 1 or epsilon <= 0:
        raise ValueError("max_rounds must be >= 1 and epsilon > 0")
    weights = check_weights(cfg.selection_weights if weights is None else weights)
    order = list(range(state.n_players)) if order is None else list(order)
    updates = []
    state.converged = False
    for _ in range(max_rounds):
        state.round += 1
        changed_any = False
        best_gain = 0.0
        for i in order:
            incumbent = state.strategies[i]
            others = state.others_load(i)
            new = best_response(state, i, cfg, weights)
            scale = state.scales[i]
            old_F = state.problems[i].evaluate_genes(incumbent.genes, others, state.coeffs)
            old_score = float(scale.score(old_F, weights)[0])
            new_score = float(scale.score(np.array(new.objectives), weights)[0])
            assert new_score <= old_score + 1e-9, "best response worsened the acting player"
            changed = new.key() != incumbent.key()
            updates.append(UpdateRecord(state.round, i, old_score, new_score, changed))
            if changed:
                state.set_strategy(i, new)
                changed_any = True
                best_gain = max(best_gain, (old_score - new_score) * _currency_factor(scale, weights))
        log.info("round %d: changed=%s max improvement=%.3g", state.round, changed_any, best_gain)
        if not changed_any or best_gain <= epsilon:
            state.converged = True
            break
    for i in range(state.n_players):
        state.strategies[i].objectives = state.objectives(i)

    gains = None
    if verify_samples:
        gains = deviation_gains(state, verify_samples, weights, seed=cfg.rng_seed)
    return EquilibriumReport(
        rounds_used=state.round,
        converged=state.converged,
        objectives=[s.objectives for s in state.strategies],
        max_deviation_gain=None if gains is None else float(gains.max(initial=0.0)),
        deviation_gains=gains,
        balance=energy_balance(state),
        updates=updates,
    )


def deviation_gains(state: GameState, samples_per_player: int = 1000, weights=None, seed: int = 0) -> np.ndarray:
    """Largest scalarised improvement per player over sampled unilateral deviations.

    Gains are in currency-equivalent units, so under cost-only weights they
    are plain currency. Deviations are uniform random feasible schedules plus the all-preferred
    and all-earliest schedules, each evaluated against the frozen load of the
    other players.
    """
    weights = check_weights((0.5, 0.5) if weights is None else weights)
    gains = np.zeros(state.n_players)
    for i, prob in enumerate(state.problems):
        rng = np.random.default_rng([seed, 0x5EED, i])
        others = state.others_load(i)
        deviations = np.vstack([
            prob.preferred_genes(),
            prob.earliest_genes(),
            prob.random_genes(rng, samples_per_player),
        ])
        current = prob.evaluate_genes(state.strategies[i].genes, others, state.coeffs)
        F = prob.evaluate_genes(deviations, others, state.coeffs)
        scale = state.scales[i] or Scale.of(np.vstack([current, F]))
        gain = scale.score(current, weights)[0] - scale.score(F, weights).min()
        gains[i] = max(float(gain) * _currency_factor(scale, weights), 0.0)
    return gains


def verify_equilibrium(state: GameState, samples_per_player: int = 1000, epsilon: float = 1e-6, weights=None, seed: int = 0) -> float:
    """Maximum deviation gain over all players; the profile is epsilon-Nash when it is <= epsilon."""
    gains = deviation_gains(state, samples_per_player, weights, seed)
    gain = float(gains.max(initial=0.0))
    if gain > epsilon:
        log.warning("profile is not %.3g-Nash: best sampled deviation gains %.3g", epsilon, gain)
    return gain


def energy_balance(state: GameState) -> BalanceSheet:
    """Utility supply, prosumer generation, demand and exported surplus per slot."""
    n = state.grid.slots_per_day
    demand = [Fraction(0)] * n
    for profile in state.profiles:
        demand = [d + Fraction(float(x)) for d, x in zip(demand, profile)]
    generation = [Fraction(0)] * n
    for player in state.players:
        if player.generation is not None:
            generation = [g + Fraction(float(x)) for g, x in zip(generation, player.generation.energy_kwh)]
    utility = [max(d - g, Fraction(0)) for d, g in zip(demand, generation)]
    surplus = [max(g - d, Fraction(0)) for d, g in zip(demand, generation)]
    return BalanceSheet(tuple(demand), tuple(generation), tuple(utility), tuple(surplus))
