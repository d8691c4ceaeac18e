"""Command line entry point ``dr-game``."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import outputs
from .catalog import catalog_errors, read_catalog
from .config import load_config
from .exceptions import ValidationError
from .game import energy_balance
from .nsga2 import evolve
from .scenarios import REF, ScenarioSpec, all_scenarios, compare, population_from_config, run_scenario

EXIT_VALIDATION = 2
EXIT_NONCONVERGED = 3


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress (-v info, -vv debug).")
def main(verbose):
    """Residential demand-response game solved by per-player NSGA-II best responses."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--scenario", type=click.Choice(["ref", "cost", "cost-discomfort", "all"]), default="all", show_default=True)
@click.option("--players", type=int, default=None, help="Number of players [config: 30].")
@click.option("--tasks-min", type=int, default=None, help="Minimum tasks per player [config: 8].")
@click.option("--prosumer-frac", type=float, default=None, help="Fraction of prosumers [config: 0.3].")
@click.option("--catalog", type=click.Path(dir_okay=False), default=None, help="Task catalog file (default: bundled appliance catalog).")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="YAML config file.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--seeds", "n_seeds", type=click.IntRange(1), default=1, show_default=True, help="Run seeds seed, seed+1, ...")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--strict", is_flag=True, help="Exit 3 when any game fails to converge.")
@click.option("--dump-fronts", is_flag=True, help="Write front_<player>.csv for every optimised run.")
@click.option("--verify/--no-verify", default=True, show_default=True, help="Certify equilibria by sampled deviations.")
def run(scenario, players, tasks_min, prosumer_frac, catalog, config_path, seed, n_seeds, out_dir, strict, dump_fronts, verify):
    """Run one or all scenarios and write CSV outputs."""
    try:
        config = load_config(config_path)
        overrides = {k: v for k, v in (("players", players), ("tasks_min", tasks_min), ("prosumer_frac", prosumer_frac)) if v is not None}
        if overrides:
            config = config.with_overrides(population=overrides)
        grid = config.time_grid()
        tasks = read_catalog(catalog, grid)
        specs = all_scenarios(config) if scenario == "all" else [ScenarioSpec.named(scenario, (config.solver.w_cost, config.solver.w_discomfort) if scenario == "cost-discomfort" else None)]
        if scenario != "all" and specs[0].name != REF:
            specs.insert(0, ScenarioSpec.named(REF))
    except (ValidationError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    out = Path(out_dir)
    results = []
    nonconverged = []
    for s in range(seed, seed + n_seeds):
        try:
            population = population_from_config(config, s, tasks)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        for spec in specs:
            result = run_scenario(spec, config, s, population, verify=verify)
            results.append(result)
            run_dir = out / outputs.short_name(spec.name) / f"seed_{s}"
            outputs.write_profile(result.price, run_dir / "price_signal.csv", "price", grid)
            outputs.write_balance(energy_balance(result.state), run_dir / "balance.csv")
            outputs.write_equilibrium_report(result, run_dir / "equilibrium_report.csv")
            if dump_fronts and spec.optimize:
                _dump_fronts(result, spec, config, s, run_dir)
            if not result.converged:
                nonconverged.append((spec.name, s))
            click.echo(
                f"{spec.name:<20} seed={s} cost={result.total_cost:.4f} discomfort={result.total_discomfort:g} "
                f"rounds={result.rounds} converged={result.converged}"
            )

    comparison = compare(results)
    outputs.write_summary(comparison, out / "summary.csv")
    outputs.write_comparison(comparison, out / "comparison.csv")
    outputs.write_long_loads(results, out / "loads_long.csv", grid)
    outputs.write_long_players(results, out / "players_long.csv")
    for name, curve in comparison.load_curves.items():
        if scenario == "all" or outputs.short_name(name) in (scenario, "ref"):
            outputs.write_profile(curve, out / f"load_{outputs.short_name(name)}.csv", "kWh", grid)
    _print_comparison(comparison)
    if strict and nonconverged:
        click.echo(f"non-converged runs: {nonconverged}", err=True)
        sys.exit(EXIT_NONCONVERGED)


def _dump_fronts(result, spec, config, seed, run_dir):
    state = result.state
    cfg = config.solver_config(seed, spec.weights)
    for i, player in enumerate(state.players):
        front = evolve(player, state.others_load(i), state.coeffs, state.grid, cfg,
                       incumbent=state.strategies[i].genes, problem=state.problems[i],
                       rng=np.random.default_rng([cfg.rng_seed, state.round + 1, i]))
        outputs.write_front(front, run_dir / f"front_{player.id}.csv")


def _print_comparison(comparison):
    click.echo(f"{'scenario':<20} {'seeds':>5} {'cost':>12} {'discomfort':>12} {'%cost vs ref':>13} {'disc % of cost':>15} {'peak kWh':>9}")
    for r in comparison.rows:
        click.echo(
            f"{r.scenario:<20} {r.n_seeds:>5} {r.total_cost:>12.4f} {r.total_discomfort:>12.1f} "
            f"{r.pct_cost_vs_ref:>13.2f} {r.discomfort_norm:>15.2f} {r.peak_load:>9.2f}"
        )


@main.command(name="compare")
@click.option("--in", "in_dir", type=click.Path(exists=True, file_okay=False), required=True)
def compare_cmd(in_dir):
    """Summarise a finished run directory (medians over seeds)."""
    try:
        results = outputs.read_results(Path(in_dir))
        comparison = compare(results)
    except (ValidationError, OSError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    outputs.write_comparison(comparison, Path(in_dir) / "comparison.csv")
    _print_comparison(comparison)


@main.command()
@click.option("--catalog", type=click.Path(dir_okay=False), default=None, help="Catalog file (default: bundled appliance catalog).")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
def validate(catalog, config_path):
    """Check a task catalog; exit 2 on any error."""
    try:
        grid = load_config(config_path).time_grid()
    except (ValidationError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    errors = catalog_errors(catalog, grid)
    if errors:
        for e in errors:
            click.echo(e, err=True)
        sys.exit(EXIT_VALIDATION)
    n = len(read_catalog(catalog, grid))
    click.echo(f"ok: {n} tasks")


if __name__ == "__main__":
    main()
