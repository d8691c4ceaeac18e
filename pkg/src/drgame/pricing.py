"""Utility cost, real-time price, consumer energy cost and prosumer revenue."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import TimeGrid
from .exceptions import LengthMismatch, ValidationError
from .validation import check_profile, check_same_length

# (start_h, end_h, rate in currency/kWh)
DEFAULT_TOU_TIERS = ((0.0, 7.0, 0.08), (7.0, 18.0, 0.12), (18.0, 22.0, 0.20), (22.0, 24.0, 0.12))
DEFAULT_A_COEFF = 0.002
DEFAULT_C_COEFF = 0.0
DEFAULT_SOLAR_PEAK_KW = 2.0


@dataclass(frozen=True, eq=False)
class CostCoefficients:
    """Per-slot quadratic utility cost coefficients ``a l^2 + b l + c``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(x, dtype=float) for x in (self.a, self.b, self.c)]
        if len({arr.shape for arr in arrays}) != 1 or arrays[0].ndim != 1:
            raise LengthMismatch("a, b and c must be 1-D sequences of equal length")
        if (arrays[0] < 0).any() or (arrays[1] < 0).any():
            raise ValidationError("a and b coefficients must be non-negative")
        for name, arr in zip("abc", arrays):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.a)

    def scaled(self, factor: float) -> "CostCoefficients":
        return CostCoefficients(self.a * factor, self.b * factor, self.c * factor)

    @classmethod
    def from_tou(
        cls,
        tiers: Sequence[Sequence[float]] = DEFAULT_TOU_TIERS,
        a_coeff: float | Sequence[float] = DEFAULT_A_COEFF,
        c_coeff: float | Sequence[float] = DEFAULT_C_COEFF,
        grid: TimeGrid = TimeGrid(),
    ) -> "CostCoefficients":
        n = grid.slots_per_day
        return cls(
            np.broadcast_to(np.asarray(a_coeff, dtype=float), (n,)).copy(),
            tou_rates(tiers, grid),
            np.broadcast_to(np.asarray(c_coeff, dtype=float), (n,)).copy(),
        )


def tou_rates(tiers: Sequence[Sequence[float]], grid: TimeGrid = TimeGrid()) -> np.ndarray:
    """Expand ``[start_h, end_h, rate]`` tiers into a per-slot rate.

    A slot takes the rate of the tier containing its start time; tiers must
    cover the whole day without overlap.
    """
    hours = grid.hours()
    rates = np.full(grid.slots_per_day, np.nan)
    for start_h, end_h, rate in tiers:
        if rate < 0:
            raise ValidationError(f"negative tariff rate {rate}")
        mask = (hours >= start_h) & (hours < end_h)
        if not np.isnan(rates[mask]).all():
            raise ValidationError(f"tariff tier [{start_h}, {end_h}) overlaps another tier")
        rates[mask] = rate
    if np.isnan(rates).any():
        raise ValidationError("tariff tiers do not cover the whole day")
    return rates


@dataclass(frozen=True, eq=False)
class GenerationProfile:
    """Energy generated per slot by a prosumer and the rate it is paid."""

    energy_kwh: np.ndarray
    revenue_rate: float

    def __post_init__(self):
        energy = np.asarray(self.energy_kwh, dtype=float)
        if energy.ndim != 1 or (energy < 0).any():
            raise ValidationError("generation must be a 1-D non-negative sequence")
        if self.revenue_rate < 0:
            raise ValidationError("revenue rate must be non-negative")
        energy.setflags(write=False)
        object.__setattr__(self, "energy_kwh", energy)

    @classmethod
    def zeros(cls, grid: TimeGrid = TimeGrid(), revenue_rate: float = 0.0) -> "GenerationProfile":
        return cls(np.zeros(grid.slots_per_day), revenue_rate)


def solar_profile(
    peak_kw: float = DEFAULT_SOLAR_PEAK_KW,
    grid: TimeGrid = TimeGrid(),
    sunrise_h: float = 7.0,
    sunset_h: float = 19.0,
) -> np.ndarray:
    """Half-sine generation between sunrise and sunset, sampled at slot midpoints."""
    mid = grid.hours() + grid.slot_hours / 2
    phase = (mid - sunrise_h) / (sunset_h - sunrise_h)
    power = np.where((phase > 0) & (phase < 1), peak_kw * np.sin(np.pi * phase), 0.0)
    return power * grid.slot_hours


def utility_cost(load, coeffs: CostCoefficients) -> np.ndarray:
    load = check_profile(load, name="load")
    check_same_length(load, coeffs.a)
    return coeffs.a * load**2 + coeffs.b * load + coeffs.c


def realtime_price(load, coeffs: CostCoefficients) -> np.ndarray:
    """Marginal utility cost per slot, ``a l + b``."""
    load = check_profile(load, name="load")
    check_same_length(load, coeffs.a)
    return coeffs.a * load + coeffs.b


def consumer_energy_cost(price, profile) -> float:
    price = check_profile(price, name="price")
    profile = check_profile(profile, name="profile")
    check_same_length(price, profile)
    return float(np.dot(price, profile))


def prosumer_revenue(gen: GenerationProfile) -> float:
    return float(gen.revenue_rate * np.sum(gen.energy_kwh))
