"""Time grid, tasks, schedules and consumption profiles.

All per-slot quantities are energies in kWh. Windows are expressed in slot
indices on a single simulated day; a window whose latest finish precedes its
earliest start wraps around midnight and every computation on it is circular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import (
    InfeasibleStart,
    LengthMismatch,
    MissingTask,
    NonPositivePower,
    PreferredOutsideAdmitted,
    PreferredWindowTooShort,
    ValidationError,
    WindowTooShort,
)

HORIZON_HOURS = 24.0


@dataclass(frozen=True)
class TimeGrid:
    """Discretisation of one day into equal slots."""

    slots_per_day: int = 48

    def __post_init__(self):
        if not isinstance(self.slots_per_day, (int, np.integer)) or self.slots_per_day <= 0:
            raise ValidationError(f"slots_per_day must be a positive integer, got {self.slots_per_day!r}")

    @property
    def slot_hours(self) -> float:
        return HORIZON_HOURS / self.slots_per_day

    @property
    def horizon_hours(self) -> float:
        return HORIZON_HOURS

    def hours_to_slots(self, hours: float) -> int:
        """Convert a duration or clock time in hours to an exact slot count."""
        slots = hours / self.slot_hours
        rounded = round(slots)
        if not math.isclose(slots, rounded, abs_tol=1e-9):
            raise ValidationError(
                f"{hours} h is not a whole number of {self.slot_hours} h slots"
            )
        return int(rounded)

    def slot_hour(self, slot: int) -> float:
        return slot * self.slot_hours

    def hours(self) -> np.ndarray:
        """Clock time at the start of every slot."""
        return np.arange(self.slots_per_day) * self.slot_hours


@dataclass(frozen=True)
class Task:
    """One schedulable appliance run.

    ``latest_finish_slot`` may be smaller than ``earliest_start_slot``, which
    denotes a window wrapping midnight. Finish slots live in ``(0, n]`` so that
    a window ending at 24:00 is ``n``. ``profile_kw`` optionally overrides the
    rectangular power draw with one value per occupied slot.
    """

    id: str
    power_kw: float
    duration_slots: int
    earliest_start_slot: int
    latest_finish_slot: int
    preferred_start_slot: int | None = None
    preferred_finish_slot: int | None = None
    profile_kw: tuple[float, ...] | None = None

    @property
    def has_preference(self) -> bool:
        return self.preferred_start_slot is not None and self.preferred_finish_slot is not None

    def energy_demand_kwh(self, grid: TimeGrid = TimeGrid()) -> float:
        return float(np.sum(self.power_per_slot()) * grid.slot_hours)

    def power_per_slot(self) -> np.ndarray:
        if self.profile_kw is not None:
            return np.asarray(self.profile_kw, dtype=float)
        return np.full(self.duration_slots, float(self.power_kw))

    def with_preference(self, start_slot: int, finish_slot: int) -> "Task":
        return Task(
            self.id,
            self.power_kw,
            self.duration_slots,
            self.earliest_start_slot,
            self.latest_finish_slot,
            start_slot,
            finish_slot,
            self.profile_kw,
        )

    @classmethod
    def from_hours(
        cls,
        id: str,
        power_kw: float,
        earliest_start_h: float,
        latest_finish_h: float,
        duration_h: float,
        preferred_start_h: float | None = None,
        preferred_finish_h: float | None = None,
        grid: TimeGrid = TimeGrid(),
    ) -> "Task":
        n = grid.slots_per_day

        def start(h):
            return grid.hours_to_slots(h) % n

        def finish(h):
            return (grid.hours_to_slots(h) - 1) % n + 1

        has_pref = preferred_start_h is not None and preferred_finish_h is not None
        return cls(
            id=str(id),
            power_kw=float(power_kw),
            duration_slots=grid.hours_to_slots(duration_h),
            earliest_start_slot=start(earliest_start_h),
            latest_finish_slot=finish(latest_finish_h),
            preferred_start_slot=start(preferred_start_h) if has_pref else None,
            preferred_finish_slot=finish(preferred_finish_h) if has_pref else None,
        )


@dataclass(frozen=True)
class Schedule:
    """Start slot per task id for one player."""

    start_slots: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_genes(cls, tasks: Sequence[Task], genes: Iterable[int]) -> "Schedule":
        return cls({task.id: int(g) for task, g in zip(tasks, genes)})

    def genes(self, tasks: Sequence[Task]) -> np.ndarray:
        try:
            return np.array([self.start_slots[task.id] for task in tasks], dtype=np.int64)
        except KeyError as exc:
            raise MissingTask(f"schedule has no start slot for task {exc.args[0]!r}") from None


# Circular helpers. Positions are measured relative to a window origin so that
# a wrapped window unrolls into the interval [0, length].


def rel_start(slot: int, origin: int, n: int) -> int:
    return (slot - origin) % n


def rel_finish(slot: int, origin: int, n: int) -> int:
    return (slot - origin - 1) % n + 1


def window_length(task: Task, grid: TimeGrid) -> int:
    """Length of the admitted window in slots, measured circularly."""
    return rel_finish(task.latest_finish_slot, task.earliest_start_slot, grid.slots_per_day)


def preferred_bounds(task: Task, grid: TimeGrid) -> tuple[int, int]:
    """Preferred window as ``(start, finish)`` offsets from the earliest start."""
    n = grid.slots_per_day
    origin = task.earliest_start_slot
    return (
        rel_start(task.preferred_start_slot, origin, n),
        rel_finish(task.preferred_finish_slot, origin, n),
    )


def validate_task(task: Task, grid: TimeGrid = TimeGrid()) -> None:
    """Raise a :class:`ValidationError` subclass if ``task`` is not schedulable.

    A task without a preferred window is checked only against its admitted
    window, which is how catalog templates are validated.
    """
    n = grid.slots_per_day
    if not task.power_kw > 0:
        raise NonPositivePower(f"{task.id}: power must be positive, got {task.power_kw}")
    if task.profile_kw is not None:
        if len(task.profile_kw) != task.duration_slots:
            raise LengthMismatch(f"{task.id}: profile override length != duration")
        if min(task.profile_kw) < 0:
            raise NonPositivePower(f"{task.id}: profile override has negative power")
    for name in ("earliest_start_slot",):
        if not 0 <= getattr(task, name) < n:
            raise ValidationError(f"{task.id}: {name} outside [0, {n})")
    if not 0 < task.latest_finish_slot <= n:
        raise ValidationError(f"{task.id}: latest_finish_slot outside (0, {n}]")
    if task.duration_slots < 1:
        raise WindowTooShort(f"{task.id}: duration must be at least one slot")
    length = window_length(task, grid)
    if task.duration_slots > length:
        raise WindowTooShort(
            f"{task.id}: duration {task.duration_slots} exceeds admitted window of {length} slots"
        )
    if task.has_preference:
        if not (0 <= task.preferred_start_slot < n and 0 < task.preferred_finish_slot <= n):
            raise PreferredOutsideAdmitted(f"{task.id}: preferred slots out of range")
        lo, hi = preferred_bounds(task, grid)
        if not lo < hi <= length:
            raise PreferredOutsideAdmitted(f"{task.id}: preferred window not inside admitted window")
        if hi - lo < task.duration_slots:
            raise PreferredWindowTooShort(
                f"{task.id}: preferred window of {hi - lo} slots shorter than duration"
            )


def feasible_starts(task: Task, grid: TimeGrid = TimeGrid()) -> tuple[int, ...]:
    """Start slots satisfying the admitted window, in chronological window order."""
    n = grid.slots_per_day
    last = window_length(task, grid) - task.duration_slots
    return tuple((task.earliest_start_slot + r) % n for r in range(last + 1))


def check_start(task: Task, start_slot: int, grid: TimeGrid) -> int:
    """Return the offset of ``start_slot`` inside the admitted window or raise."""
    n = grid.slots_per_day
    if not 0 <= start_slot < n:
        raise InfeasibleStart(f"{task.id}: start slot {start_slot} outside [0, {n})")
    r = rel_start(start_slot, task.earliest_start_slot, n)
    if r + task.duration_slots > window_length(task, grid):
        raise InfeasibleStart(f"{task.id}: start slot {start_slot} violates the admitted window")
    return r


def task_profile(task: Task, start_slot: int, grid: TimeGrid = TimeGrid()) -> np.ndarray:
    """Per-slot energy of one task started at ``start_slot``."""
    check_start(task, start_slot, grid)
    n = grid.slots_per_day
    profile = np.zeros(n)
    occupied = (start_slot + np.arange(task.duration_slots)) % n
    profile[occupied] = task.power_per_slot() * grid.slot_hours
    return profile


def player_profile(schedule: Schedule, tasks: Sequence[Task], grid: TimeGrid = TimeGrid()) -> np.ndarray:
    profile = np.zeros(grid.slots_per_day)
    for task in tasks:
        if task.id not in schedule.start_slots:
            raise MissingTask(f"schedule has no start slot for task {task.id!r}")
        profile += task_profile(task, schedule.start_slots[task.id], grid)
    return profile


def aggregate_load(profiles: Sequence[np.ndarray], grid: TimeGrid | None = None) -> np.ndarray:
    """Element-wise sum of consumption profiles.

    Each slot is summed with ``math.fsum`` so the result is correctly rounded
    and therefore independent of the input order.
    """
    profiles = [np.asarray(p, dtype=float) for p in profiles]
    if not profiles:
        if grid is None:
            raise LengthMismatch("cannot infer load length from an empty profile list")
        return np.zeros(grid.slots_per_day)
    length = profiles[0].shape
    for p in profiles:
        if p.ndim != 1 or p.shape != length:
            raise LengthMismatch(f"profile shapes differ: {p.shape} vs {length}")
    if grid is not None and length[0] != grid.slots_per_day:
        raise LengthMismatch(f"profiles have {length[0]} slots, grid has {grid.slots_per_day}")
    stacked = np.stack(profiles)
    return np.array([math.fsum(column) for column in stacked.T])
