"""Time shift of a scheduled task and the quadratic discomfort cost."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .domain import Task, TimeGrid, check_start, feasible_starts, preferred_bounds
from .exceptions import NegativeShift, ValidationError


@dataclass(frozen=True)
class DiscomfortCoefficients:
    """Coefficients of ``alpha * shift**2 + beta * shift + delta``, shift in slots."""

    alpha: float = 1.0
    beta: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if min(self.alpha, self.beta, self.delta) < 0:
            raise ValidationError("discomfort coefficients must be non-negative")


def _shift(start: int, duration: int, pref_lo: int, pref_hi: int) -> int:
    end = start + duration
    if start >= pref_lo and end <= pref_hi:
        return 0
    if start <= pref_lo and end <= pref_hi:
        return pref_lo - start
    if start >= pref_lo and end >= pref_hi:
        return end - pref_hi
    # Run overhangs the preferred window on both sides.
    return max(pref_lo - start, end - pref_hi)


def time_shift(task: Task, start_slot: int, grid: TimeGrid = TimeGrid()) -> int:
    """Slots by which a run started at ``start_slot`` leaves the preferred window.

    Positions are unrolled from the earliest admitted start so wrapped windows
    use circular distances.
    """
    if not task.has_preference:
        raise ValidationError(f"{task.id}: task has no preferred window")
    offset = check_start(task, start_slot, grid)
    lo, hi = preferred_bounds(task, grid)
    return _shift(offset, task.duration_slots, lo, hi)


def shift_table(task: Task, grid: TimeGrid = TimeGrid()) -> np.ndarray:
    """Time shift for every start slot of the day; ``-1`` marks infeasible starts."""
    table = np.full(grid.slots_per_day, -1, dtype=np.int64)
    for slot in feasible_starts(task, grid):
        table[slot] = time_shift(task, slot, grid)
    return table


def discomfort_cost(shifts: Iterable[float], coeffs: DiscomfortCoefficients = DiscomfortCoefficients()) -> float:
    shifts = np.asarray(list(shifts) if not isinstance(shifts, np.ndarray) else shifts, dtype=float)
    if (shifts < 0).any():
        raise NegativeShift("time shifts must be non-negative")
    return float(np.sum(coeffs.alpha * shifts**2 + coeffs.beta * shifts + coeffs.delta))
