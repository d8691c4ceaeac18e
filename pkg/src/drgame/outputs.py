"""CSV writers and readers for run outputs."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .domain import TimeGrid
from .game import BalanceSheet, EquilibriumReport
from .nsga2 import ParetoFront
from .scenarios import COST, COST_DISCOMFORT, REF, SHORT_NAMES, Comparison, ScenarioResult

SUMMARY_COLUMNS = ("scenario", "seed", "total_cost", "total_discomfort", "pct_cost_vs_ref", "discomfort_norm")
_LONG_NAMES = {v: k for k, v in SHORT_NAMES.items()}
_ORDER = {REF: 0, COST: 1, COST_DISCOMFORT: 2}


def short_name(scenario: str) -> str:
    return _LONG_NAMES.get(scenario, scenario)


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return "" if np.isnan(x) else format(float(x), ".12g")
    return str(x)


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def write_summary(comparison: Comparison, path: Path) -> None:
    rows = sorted(comparison.per_seed, key=lambda d: (d["seed"], _ORDER.get(d["scenario"], len(_ORDER))))
    _write(path, SUMMARY_COLUMNS, ([d[c] for c in SUMMARY_COLUMNS] for d in rows))


def write_comparison(comparison: Comparison, path: Path) -> None:
    header = ("scenario", "n_seeds", "total_cost", "total_discomfort", "pct_cost_vs_ref", "pct_cost_vs_cost", "discomfort_norm", "peak_load")
    _write(path, header, ([getattr(r, h) for h in header] for r in comparison.rows))


def write_profile(values: np.ndarray, path: Path, column: str, grid: TimeGrid) -> None:
    hours = grid.hours()
    _write(path, ("slot", "hour", column), ((t, hours[t], values[t]) for t in range(grid.slots_per_day)))


def write_balance(balance: BalanceSheet, path: Path) -> None:
    arrays = balance.as_arrays()
    rows = zip(range(len(balance.demand)), arrays["demand"], arrays["generation"], arrays["utility"], arrays["surplus"])
    _write(path, ("slot", "E_d", "E_p", "E_u", "surplus"), rows)


def write_equilibrium_report(result: ScenarioResult, path: Path) -> None:
    report: EquilibriumReport | None = result.report
    gains = report.deviation_gains if report is not None and report.deviation_gains is not None else None
    rows = []
    for i, pid in enumerate(result.player_ids):
        gain = float(gains[i]) if gains is not None else float("nan")
        rows.append((pid, result.player_kinds[i], result.costs[i], result.discomforts[i], result.rounds, gain))
    _write(path, ("player", "kind", "cost", "discomfort", "rounds", "deviation_gain"), rows)


def write_front(front: ParetoFront, path: Path) -> None:
    n_genes = len(front.members[0].genes) if len(front) else 0
    header = ["cost", "discomfort"] + [f"gene_{j}" for j in range(n_genes)]
    _write(path, header, ([m.objectives.cost, m.objectives.discomfort, *m.genes.tolist()] for m in front))


def write_long_loads(results: Sequence[ScenarioResult], path: Path, grid: TimeGrid) -> None:
    hours = grid.hours()
    rows = ((r.name, r.seed, t, hours[t], r.load[t]) for r in results for t in range(grid.slots_per_day))
    _write(path, ("scenario", "seed", "slot", "hour", "kwh"), rows)


def write_long_players(results: Sequence[ScenarioResult], path: Path) -> None:
    rows = (
        (r.name, r.seed, pid, r.player_kinds[i], r.costs[i], r.discomforts[i])
        for r in results
        for i, pid in enumerate(r.player_ids)
    )
    _write(path, ("scenario", "seed", "player", "kind", "cost", "discomfort"), rows)


def read_results(directory: Path) -> list[ScenarioResult]:
    """Rebuild lightweight results from ``summary.csv`` and ``loads_long.csv``."""
    directory = Path(directory)
    loads: dict[tuple[str, int], list[float]] = {}
    long_path = directory / "loads_long.csv"
    if long_path.exists():
        with open(long_path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                loads.setdefault((row["scenario"], int(row["seed"])), []).append(float(row["kwh"]))
    results = []
    with open(directory / "summary.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["scenario"], int(row["seed"]))
            results.append(ScenarioResult(
                name=key[0],
                seed=key[1],
                total_cost=float(row["total_cost"]),
                total_discomfort=float(row["total_discomfort"]),
                load=np.array(loads.get(key, [0.0])),
            ))
    return results
