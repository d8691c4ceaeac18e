"""Reference, cost-only and cost-discomfort experiments and their comparison."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .catalog import read_catalog
from .comfort import DiscomfortCoefficients
from .config import ExperimentConfig
from .domain import Task, TimeGrid, window_length
from .exceptions import EmptyCatalog, MissingReference, PreferredWindowInfeasible, ValidationError
from .game import EquilibriumReport, GameState, run_to_equilibrium
from .objectives import CONSUMER, PROSUMER, Player
from .pricing import GenerationProfile, solar_profile

REF = "Ref-sce"
COST = "Cost-sce"
COST_DISCOMFORT = "Cost-discomfort-sce"
SHORT_NAMES = {"ref": REF, "cost": COST, "cost-discomfort": COST_DISCOMFORT}


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    weights: tuple[float, float] = (0.5, 0.5)
    optimize: bool = True

    def __post_init__(self):
        if self.name == REF and self.optimize:
            raise ValidationError("Ref-sce is never optimised")
        if self.name == COST and tuple(self.weights) != (1.0, 0.0):
            raise ValidationError("Cost-sce uses weights (1, 0)")

    @classmethod
    def named(cls, name: str, weights: tuple[float, float] | None = None) -> "ScenarioSpec":
        name = SHORT_NAMES.get(name, name)
        if name == REF:
            return cls(REF, (1.0, 0.0), optimize=False)
        if name == COST:
            return cls(COST, (1.0, 0.0))
        if name == COST_DISCOMFORT:
            return cls(COST_DISCOMFORT, weights or (0.5, 0.5))
        raise ValidationError(f"unknown scenario {name!r}")


def all_scenarios(config: ExperimentConfig | None = None) -> list[ScenarioSpec]:
    cd_weights = None
    if config is not None:
        cd_weights = (config.solver.w_cost, config.solver.w_discomfort)
    return [ScenarioSpec.named(REF), ScenarioSpec.named(COST), ScenarioSpec.named(COST_DISCOMFORT, cd_weights)]


@dataclass
class ScenarioResult:
    name: str
    seed: int
    total_cost: float
    total_discomfort: float
    load: np.ndarray
    player_ids: list[str] = field(default_factory=list)
    player_kinds: list[str] = field(default_factory=list)
    costs: np.ndarray | None = None
    discomforts: np.ndarray | None = None
    price: np.ndarray | None = None
    rounds: int = 0
    converged: bool = True
    max_deviation_gain: float | None = None
    report: EquilibriumReport | None = field(default=None, repr=False)
    state: GameState | None = field(default=None, repr=False)


def random_preference(task: Task, rng: np.random.Generator, grid: TimeGrid, slack: int = 2) -> Task:
    """Place a preferred window of ``duration + slack`` slots uniformly inside the admitted window."""
    n = grid.slots_per_day
    width = window_length(task, grid)
    length = min(task.duration_slots + slack, width)
    offset = int(rng.integers(0, width - length + 1))
    start = (task.earliest_start_slot + offset) % n
    finish = (task.earliest_start_slot + offset + length - 1) % n + 1
    return task.with_preference(start, finish)


def generate_population(
    n_players: int,
    prosumer_fraction: float,
    tasks_per_player_min: int,
    catalog: Sequence[Task],
    seed: int,
    grid: TimeGrid = TimeGrid(),
    discomfort_coeffs: DiscomfortCoefficients = DiscomfortCoefficients(),
    solar_peak_kw: float = 2.0,
    revenue_rate: float = 0.0,
) -> list[Player]:
    """Seeded random population drawn from a task catalog.

    Each player draws between ``tasks_per_player_min`` and all catalog tasks
    without replacement. Catalog entries without a preferred window get a
    random one per player.
    """
    catalog = list(catalog)
    if not catalog:
        raise EmptyCatalog("catalog has no tasks")
    if n_players < 1:
        raise ValidationError("n_players must be at least 1")
    if not 0 <= prosumer_fraction <= 1:
        raise ValidationError("prosumer_fraction must lie in [0, 1]")
    if tasks_per_player_min > len(catalog):
        raise ValidationError(
            f"cannot draw {tasks_per_player_min} distinct tasks from a catalog of {len(catalog)}"
        )
    rng = np.random.default_rng(seed)
    n_prosumers = int(round(n_players * prosumer_fraction))
    prosumers = set(rng.choice(n_players, size=n_prosumers, replace=False).tolist())
    width = len(str(n_players - 1))
    players = []
    for i in range(n_players):
        n_tasks = int(rng.integers(tasks_per_player_min, len(catalog) + 1))
        picks = sorted(rng.choice(len(catalog), size=n_tasks, replace=False).tolist())
        tasks = []
        for j in picks:
            task = catalog[j]
            tasks.append(task if task.has_preference else random_preference(task, rng, grid))
        generation = None
        kind = CONSUMER
        if i in prosumers:
            kind = PROSUMER
            scale = rng.uniform(0.8, 1.2)
            generation = GenerationProfile(solar_profile(solar_peak_kw * scale, grid), revenue_rate)
        players.append(Player(f"P{i:0{width}d}", kind, tasks, generation, discomfort_coeffs))
    return players


def population_from_config(config: ExperimentConfig, seed: int, catalog: Sequence[Task] | None = None) -> list[Player]:
    grid = config.time_grid()
    if catalog is None:
        catalog = read_catalog(None, grid)
    pop = config.population
    return generate_population(
        pop.players,
        pop.prosumer_frac,
        pop.tasks_min,
        catalog,
        seed,
        grid,
        config.discomfort_coefficients(),
        config.pricing.solar_peak_kw,
        config.revenue_rate(),
    )


def run_scenario(
    spec: ScenarioSpec,
    config: ExperimentConfig = ExperimentConfig(),
    seed: int = 0,
    players: Sequence[Player] | None = None,
    catalog: Sequence[Task] | None = None,
    verify: bool = True,
) -> ScenarioResult:
    """Run one scenario on a seeded population.

    The reference scenario starts every task at its preferred start and is
    only evaluated; the others play the game to equilibrium with the
    scenario's selection weights.
    """
    grid = config.time_grid()
    coeffs = config.cost_coefficients()
    if players is None:
        players = population_from_config(config, seed, catalog)
    for p in players:
        for t in p.tasks:
            if not t.has_preference or window_length(t, grid) < t.duration_slots:
                raise PreferredWindowInfeasible(f"{p.id}/{t.id}: no usable preferred window")
    state = GameState.initial(players, coeffs, grid, start="preferred")
    report = None
    if spec.optimize:
        g = config.game
        report = run_to_equilibrium(
            state,
            max_rounds=g.max_rounds,
            epsilon=g.epsilon,
            cfg=config.solver_config(seed, spec.weights),
            weights=spec.weights,
            verify_samples=g.verify_samples if verify else 0,
        )
    objectives = np.array([state.objectives(i) for i in range(state.n_players)], dtype=float).reshape(-1, 2)
    return ScenarioResult(
        name=spec.name,
        seed=seed,
        total_cost=float(objectives[:, 0].sum()),
        total_discomfort=float(objectives[:, 1].sum()),
        load=state.load(),
        player_ids=[p.id for p in players],
        player_kinds=[p.kind for p in players],
        costs=objectives[:, 0],
        discomforts=objectives[:, 1],
        price=state.price.copy(),
        rounds=state.round,
        converged=state.converged if spec.optimize else True,
        max_deviation_gain=None if report is None else report.max_deviation_gain,
        report=report,
        state=state,
    )


@dataclass
class ComparisonRow:
    scenario: str
    n_seeds: int
    total_cost: float
    total_discomfort: float
    pct_cost_vs_ref: float
    pct_cost_vs_cost: float
    discomfort_norm: float
    peak_load: float


@dataclass
class Comparison:
    rows: list[ComparisonRow]
    per_seed: list[dict]
    load_curves: dict[str, np.ndarray]

    def row(self, scenario: str) -> ComparisonRow:
        for r in self.rows:
            if r.scenario == scenario:
                return r
        raise KeyError(scenario)


def _pct(value: float, base: float) -> float:
    if base == 0:
        return 0.0 if value == 0 else float("nan")
    return 100.0 * (value - base) / abs(base)


def compare(results: Iterable[ScenarioResult]) -> Comparison:
    """Relative deltas of every scenario, per seed and as medians over seeds.

    Cost deltas are percentages of the Ref-sce cost. Discomfort is reported as
    a percentage of the Cost-sce discomfort of the same seed, because the
    reference discomfort is zero.
    """
    results = list(results)
    by_key = {(r.name, r.seed): r for r in results}
    names = list(dict.fromkeys(r.name for r in results))
    if REF not in names:
        raise MissingReference("comparison needs a Ref-sce result")
    per_seed = []
    for r in results:
        ref = by_key.get((REF, r.seed))
        if ref is None:
            raise MissingReference(f"no Ref-sce result for seed {r.seed}")
        cost_run = by_key.get((COST, r.seed))
        norm = float("nan")
        if cost_run is not None:
            norm = _pct(r.total_discomfort, cost_run.total_discomfort) + 100.0
        per_seed.append({
            "scenario": r.name,
            "seed": r.seed,
            "total_cost": r.total_cost,
            "total_discomfort": r.total_discomfort,
            "pct_cost_vs_ref": _pct(r.total_cost, ref.total_cost),
            "pct_cost_vs_cost": _pct(r.total_cost, cost_run.total_cost) if cost_run else float("nan"),
            "discomfort_norm": norm,
            "peak_load": float(np.max(r.load)),
        })
    rows = []
    curves = {}
    for name in names:
        seeds = [d for d in per_seed if d["scenario"] == name]
        med = {k: statistics.median(d[k] for d in seeds) for k in seeds[0] if k not in ("scenario", "seed")}
        rows.append(ComparisonRow(scenario=name, n_seeds=len(seeds), **med))
        curves[name] = np.median(np.array([r.load for r in results if r.name == name]), axis=0)
    return Comparison(rows, per_seed, curves)
