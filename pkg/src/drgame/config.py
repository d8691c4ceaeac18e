"""Experiment configuration: defaults plus optional YAML overrides.

A config file is a mapping with any of the sections ``grid``, ``pricing``,
``comfort``, ``solver``, ``game`` and ``population``::

    pricing:
      tou_tiers: [[0, 7, 0.08], [7, 18, 0.12], [18, 22, 0.20], [22, 24, 0.12]]
      a_coeff: 0.002
    solver:
      generations: 100
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .comfort import DiscomfortCoefficients
from .domain import TimeGrid
from .exceptions import ValidationError
from .nsga2 import SolverConfig
from .pricing import (
    DEFAULT_A_COEFF,
    DEFAULT_C_COEFF,
    DEFAULT_SOLAR_PEAK_KW,
    DEFAULT_TOU_TIERS,
    CostCoefficients,
)


@dataclass(frozen=True)
class GridConfig:
    slots_per_day: int = 48


@dataclass(frozen=True)
class PricingConfig:
    tou_tiers: tuple = tuple(tuple(t) for t in DEFAULT_TOU_TIERS)
    a_coeff: float = DEFAULT_A_COEFF
    c_coeff: float = DEFAULT_C_COEFF
    revenue_rate: float | None = None  # None -> mean TOU rate
    solar_peak_kw: float = DEFAULT_SOLAR_PEAK_KW


@dataclass(frozen=True)
class ComfortConfig:
    alpha: float = 1.0
    beta: float = 0.0
    delta: float = 0.0


@dataclass(frozen=True)
class SolverSection:
    population: int = 100
    generations: int = 200
    crossover_rate: float = 0.9
    mutation_rate: float | None = None
    tournament_size: int = 2
    seed: int = 0
    w_cost: float = 0.5
    w_discomfort: float = 0.5


@dataclass(frozen=True)
class GameConfig:
    max_rounds: int = 20
    epsilon: float = 1e-6
    verify_samples: int = 1000


@dataclass(frozen=True)
class PopulationConfig:
    players: int = 30
    tasks_min: int = 8
    prosumer_frac: float = 0.3


@dataclass(frozen=True)
class ExperimentConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    pricing: PricingConfig = field(default_factory=PricingConfig)
    comfort: ComfortConfig = field(default_factory=ComfortConfig)
    solver: SolverSection = field(default_factory=SolverSection)
    game: GameConfig = field(default_factory=GameConfig)
    population: PopulationConfig = field(default_factory=PopulationConfig)

    def time_grid(self) -> TimeGrid:
        return TimeGrid(self.grid.slots_per_day)

    def cost_coefficients(self) -> CostCoefficients:
        p = self.pricing
        return CostCoefficients.from_tou(p.tou_tiers, p.a_coeff, p.c_coeff, self.time_grid())

    def revenue_rate(self) -> float:
        if self.pricing.revenue_rate is not None:
            return float(self.pricing.revenue_rate)
        return float(np.mean(self.cost_coefficients().b))

    def discomfort_coefficients(self) -> DiscomfortCoefficients:
        c = self.comfort
        return DiscomfortCoefficients(c.alpha, c.beta, c.delta)

    def solver_config(self, seed: int | None = None, weights=None) -> SolverConfig:
        s = self.solver
        return SolverConfig(
            population_size=s.population,
            generations=s.generations,
            crossover_rate=s.crossover_rate,
            mutation_rate=s.mutation_rate,
            tournament_size=s.tournament_size,
            rng_seed=s.seed if seed is None else seed,
            selection_weights=(s.w_cost, s.w_discomfort) if weights is None else tuple(weights),
        )

    def with_overrides(self, **sections: dict[str, Any]) -> "ExperimentConfig":
        return from_mapping(sections, base=self)

    def to_mapping(self) -> dict:
        return asdict(self)


_SECTIONS = {f.name: f for f in fields(ExperimentConfig)}


def from_mapping(data: dict | None, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Overlay a nested mapping onto ``base`` (defaults when omitted)."""
    cfg = base or ExperimentConfig()
    for section, values in (data or {}).items():
        if section not in _SECTIONS:
            raise ValidationError(f"unknown config section {section!r}")
        current = getattr(cfg, section)
        if not isinstance(values, dict):
            raise ValidationError(f"config section {section!r} must be a mapping")
        known = {f.name for f in fields(current)}
        unknown = set(values) - known
        if unknown:
            raise ValidationError(f"unknown keys in [{section}]: {', '.join(sorted(unknown))}")
        if "tou_tiers" in values:
            values = dict(values, tou_tiers=tuple(tuple(float(x) for x in t) for t in values["tou_tiers"]))
        cfg = replace(cfg, **{section: replace(current, **values)})
    return cfg


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ValidationError(f"cannot parse config {path}: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ValidationError("config file must contain a mapping")
    return from_mapping(data)
