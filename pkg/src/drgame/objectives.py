"""Players and their (energy cost, discomfort) objective vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .comfort import DiscomfortCoefficients, discomfort_cost, shift_table, time_shift
from .domain import Schedule, Task, TimeGrid, feasible_starts, player_profile, validate_task
from .exceptions import InfeasiblePlayer, InfeasibleSchedule, InfeasibleStart, LengthMismatch, ValidationError
from .pricing import (
    CostCoefficients,
    GenerationProfile,
    consumer_energy_cost,
    prosumer_revenue,
    realtime_price,
)
from .validation import check_profile

CONSUMER = "c-player"
PROSUMER = "p-player"


class ObjectiveVector(NamedTuple):
    cost: float
    discomfort: float


@dataclass(frozen=True, eq=False)
class Player:
    id: str
    kind: str
    tasks: tuple[Task, ...]
    generation: GenerationProfile | None = None
    discomfort_coeffs: DiscomfortCoefficients = field(default_factory=DiscomfortCoefficients)

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if self.kind not in (CONSUMER, PROSUMER):
            raise ValidationError(f"unknown player kind {self.kind!r}")
        if self.kind == CONSUMER and self.generation is not None and np.any(self.generation.energy_kwh):
            raise ValidationError(f"c-player {self.id} cannot have generation")
        ids = [t.id for t in self.tasks]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"player {self.id} has duplicate task ids")

    @property
    def is_prosumer(self) -> bool:
        return self.kind == PROSUMER

    def revenue(self) -> float:
        return prosumer_revenue(self.generation) if self.generation is not None else 0.0

    def preferred_schedule(self) -> Schedule:
        return Schedule({t.id: t.preferred_start_slot for t in self.tasks})

    def earliest_schedule(self, grid: TimeGrid = TimeGrid()) -> Schedule:
        return Schedule({t.id: feasible_starts(t, grid)[0] for t in self.tasks})


def check_player(player: Player, grid: TimeGrid = TimeGrid()) -> None:
    """Raise :class:`InfeasiblePlayer` unless every task is valid and has a preference."""
    try:
        for task in player.tasks:
            validate_task(task, grid)
            if not task.has_preference:
                raise ValidationError(f"{task.id}: players need a preferred window per task")
        if player.generation is not None and len(player.generation.energy_kwh) != grid.slots_per_day:
            raise LengthMismatch("generation profile length differs from the grid")
    except ValidationError as exc:
        raise InfeasiblePlayer(f"player {player.id}: {exc}") from exc


def evaluate(
    player: Player,
    schedule: Schedule,
    others_load,
    coeffs: CostCoefficients,
    grid: TimeGrid = TimeGrid(),
) -> ObjectiveVector:
    """Objective vector of ``schedule`` with the others' load held fixed.

    The price is evaluated on the others' load plus the player's own profile.
    """
    others_load = check_profile(others_load, grid.slots_per_day, "others_load")
    try:
        own = player_profile(schedule, player.tasks, grid)
        shifts = [time_shift(t, schedule.start_slots[t.id], grid) for t in player.tasks]
    except InfeasibleStart as exc:
        raise InfeasibleSchedule(str(exc)) from exc
    price = realtime_price(others_load + own, coeffs)
    cost = consumer_energy_cost(price, own) - player.revenue()
    return ObjectiveVector(cost, discomfort_cost(shifts, player.discomfort_coeffs))


def dominates(a, b) -> bool:
    """Pareto dominance for minimisation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


class PlayerProblem:
    """Precomputed lookup tables for evaluating many schedules of one player at once.

    Genes are start slots, one per task in ``player.tasks`` order.
    """

    def __init__(self, player: Player, grid: TimeGrid = TimeGrid()):
        check_player(player, grid)
        self.player = player
        self.grid = grid
        n = grid.slots_per_day
        k = len(player.tasks)
        self.n_tasks = k
        self.feasible = [np.array(feasible_starts(t, grid), dtype=np.int64) for t in player.tasks]
        self.profiles = np.zeros((k, n, n))
        self.shifts = np.zeros((k, n), dtype=np.int64)
        self.nearest = np.zeros((k, n), dtype=np.int64)
        for j, task in enumerate(player.tasks):
            for slot in self.feasible[j]:
                occupied = (slot + np.arange(task.duration_slots)) % n
                self.profiles[j, slot, occupied] = task.power_per_slot() * grid.slot_hours
            self.shifts[j] = shift_table(task, grid)
            self.nearest[j] = _nearest_feasible(self.feasible[j], n)
        a = player.discomfort_coeffs
        d = self.shifts.astype(float)
        self.discomfort_table = np.where(self.shifts >= 0, a.alpha * d**2 + a.beta * d + a.delta, np.nan)
        self.revenue = player.revenue()
        self._rows = np.arange(k)
        self._counts = np.array([len(f) for f in self.feasible])
        self._padded = np.zeros((k, n), dtype=np.int64)
        for j, f in enumerate(self.feasible):
            self._padded[j, : len(f)] = f

    @property
    def space_size(self) -> int:
        return int(np.prod([len(f) for f in self.feasible], dtype=np.int64))

    def preferred_genes(self) -> np.ndarray:
        return np.array([t.preferred_start_slot for t in self.player.tasks], dtype=np.int64)

    def earliest_genes(self) -> np.ndarray:
        return np.array([f[0] for f in self.feasible], dtype=np.int64)

    def random_genes(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Uniform random feasible schedules, one per row."""
        picks = (rng.random((size, self.n_tasks)) * self._counts).astype(np.int64)
        return self._padded[self._rows, picks]

    def repair(self, genes: np.ndarray) -> np.ndarray:
        """Clamp every gene to the circularly nearest feasible start."""
        genes = np.asarray(genes, dtype=np.int64) % self.grid.slots_per_day
        return self.nearest[self._rows, genes]

    def is_feasible(self, genes: np.ndarray) -> np.ndarray:
        genes = np.atleast_2d(genes)
        return (self.shifts[self._rows, genes] >= 0).all(axis=1)

    def own_profiles(self, genes: np.ndarray) -> np.ndarray:
        genes = np.atleast_2d(genes)
        return self.profiles[self._rows, genes].sum(axis=1)

    def evaluate_genes(self, genes: np.ndarray, others_load: np.ndarray, coeffs: CostCoefficients) -> np.ndarray:
        """Objective matrix of shape ``(m, 2)`` for ``m`` gene rows."""
        genes = np.atleast_2d(genes)
        if not self.is_feasible(genes).all():
            raise InfeasibleSchedule("gene matrix contains infeasible start slots")
        own = self.own_profiles(genes)
        price = coeffs.a * (others_load + own) + coeffs.b
        cost = np.einsum("ij,ij->i", price, own) - self.revenue
        discomfort = self.discomfort_table[self._rows, genes].sum(axis=1)
        return np.column_stack([cost, discomfort])


def _nearest_feasible(feasible: np.ndarray, n: int) -> np.ndarray:
    slots = np.arange(n)
    dist = np.abs(slots[:, None] - feasible[None, :])
    dist = np.minimum(dist, n - dist)
    return feasible[np.argmin(dist, axis=1)]
