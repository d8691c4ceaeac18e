import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drgame.exceptions import EmptyFront, UnevaluatedChromosome, ValidationError
from drgame.nsga2 import (
    Chromosome,
    ParetoFront,
    Scale,
    SolverConfig,
    crowding_distance,
    crowding_distances,
    evolve,
    fast_non_dominated_sort,
    non_dominated_sort,
    select_strategy,
)
from drgame.objectives import ObjectiveVector, PlayerProblem, dominates
from drgame.pricing import CostCoefficients

from conftest import brute_force_pareto, make_player, make_task, objective_set, random_coeffs, random_small_player


def _chrom(cost, disc, genes=(0,)):
    return Chromosome(np.array(genes), ObjectiveVector(cost, disc))


def _peel(F):
    """Reference O(n^2) front peeling."""
    remaining = list(range(len(F)))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(dominates(F[j], F[i]) for j in remaining)]
        fronts.append(sorted(front))
        remaining = [i for i in remaining if i not in front]
    return fronts


def test_identical_vectors_share_one_front():
    pop = [_chrom(1.0, 1.0) for _ in range(5)]
    fronts = non_dominated_sort(pop)
    assert len(fronts) == 1 and len(fronts[0]) == 5
    assert all(c.rank == 0 for c in pop)


def test_chain_gives_singleton_fronts():
    pop = [_chrom(3, 3), _chrom(1, 1), _chrom(2, 2)]
    fronts = non_dominated_sort(pop)
    assert [[c.objectives for c in f] for f in fronts] == [[(1, 1)], [(2, 2)], [(3, 3)]]


def test_sort_matches_peeling_on_random_vectors():
    rng = np.random.default_rng(0)
    for _ in range(30):
        F = rng.integers(0, 8, size=(50, 2)).astype(float)
        got = [sorted(f.tolist()) for f in fast_non_dominated_sort(F)]
        assert got == _peel(F)


def test_unevaluated_members_are_rejected():
    with pytest.raises(UnevaluatedChromosome):
        non_dominated_sort([Chromosome(np.array([0]))])


def test_crowding_examples():
    assert crowding_distance([_chrom(1, 1)]).tolist() == [np.inf]
    d = crowding_distance([_chrom(0, 2), _chrom(1, 1), _chrom(2, 0)])
    assert d[1] == pytest.approx(2.0)
    assert np.isinf(d[0]) and np.isinf(d[2])


def test_crowding_degenerate_dimension():
    F = np.array([[0.0, 5.0], [1.0, 5.0], [3.0, 5.0], [4.0, 5.0]])
    d = crowding_distances(F)
    assert np.isfinite(d[1:3]).all()
    assert d[1] == pytest.approx(3 / 4) and d[2] == pytest.approx(3 / 4)


def test_single_feasible_start_front():
    player = make_player([make_task("f", st=0, ft=48, dur=48, pst=0, pft=48)])
    front = evolve(player, np.zeros(48), CostCoefficients.from_tou(), cfg=SolverConfig(population_size=8, generations=5))
    assert len(front) == 1 and front.genes().tolist() == [[0]]


def test_two_tasks_match_enumeration():
    player = make_player([
        make_task("a", power=1.5, st=32, ft=40, dur=3, pst=34, pft=37),
        make_task("b", power=2.0, st=10, ft=16, dur=1, pst=12, pft=13),
    ])
    problem = PlayerProblem(player)
    assert problem.space_size == 36
    coeffs = CostCoefficients.from_tou()
    others = np.random.default_rng(1).uniform(5, 25, 48)
    front = evolve(player, others, coeffs, cfg=SolverConfig(population_size=20, generations=50))
    _, F = brute_force_pareto(problem, others, coeffs)
    assert objective_set(front.objectives()) == objective_set(F)


def test_same_seed_is_bit_identical():
    rng = np.random.default_rng(9)
    player = random_small_player(rng, max_tasks=3, max_starts=10)
    coeffs = random_coeffs(rng)
    others = rng.uniform(0, 30, 48)
    cfg = SolverConfig(population_size=24, generations=30, rng_seed=42)
    f1, f2 = evolve(player, others, coeffs, cfg=cfg), evolve(player, others, coeffs, cfg=cfg)
    assert np.array_equal(f1.genes(), f2.genes())
    assert np.array_equal(f1.objectives(), f2.objectives())
    assert select_strategy(f1).key() == select_strategy(f2).key()


def test_front_members_are_mutually_non_dominated_and_feasible(table1, grid):
    from scenarios_helpers import table1_player

    player = table1_player(table1, grid, seed=3)
    problem = PlayerProblem(player, grid)
    front = evolve(player, np.full(48, 10.0), CostCoefficients.from_tou(), grid, SolverConfig(generations=40), problem=problem)
    F = front.objectives()
    for i in range(len(F)):
        for j in range(len(F)):
            assert not dominates(F[i], F[j])
    assert problem.is_feasible(front.genes()).all()
    assert all(h[3] == 1.0 for h in front.history)


def test_incumbent_is_never_lost():
    rng = np.random.default_rng(4)
    player = random_small_player(rng, max_tasks=3, max_starts=12)
    problem = PlayerProblem(player)
    coeffs = random_coeffs(rng)
    others = rng.uniform(0, 30, 48)
    incumbent = problem.random_genes(rng, 1)[0]
    inc_F = problem.evaluate_genes(incumbent, others, coeffs)[0]
    front = evolve(player, others, coeffs, cfg=SolverConfig(population_size=8, generations=1), incumbent=incumbent)
    assert not any(dominates(inc_F, f) for f in front.objectives())
    assert any(np.all(f <= inc_F) for f in front.objectives())


def test_select_strategy_examples():
    front = [_chrom(10, 0, (0,)), _chrom(6, 2, (1,)), _chrom(2, 8, (2,))]
    assert select_strategy(front, (0.5, 0.5)).objectives == (6, 2)
    assert select_strategy(front, (1, 0)).objectives == (2, 8)
    assert select_strategy(front, (0, 1)).objectives == (10, 0)
    scores = Scale.of(np.array([[10, 0], [6, 2], [2, 8]])).score(np.array([[10, 0], [6, 2], [2, 8]]), (0.5, 0.5))
    assert scores.tolist() == pytest.approx([0.5, 0.375, 0.5])


def test_select_strategy_tie_breaks_on_cost_then_genes():
    front = [_chrom(4, 0, (3,)), _chrom(0, 4, (2,)), _chrom(0, 4, (1,))]
    assert select_strategy(front, (0.5, 0.5)).key() == (1,)


def test_select_strategy_errors():
    with pytest.raises(EmptyFront):
        select_strategy(ParetoFront([]))
    with pytest.raises(ValidationError):
        select_strategy([_chrom(1, 1)], (0, 0))
    with pytest.raises(ValidationError):
        select_strategy([_chrom(1, 1)], (-1, 2))


@pytest.mark.parametrize(
    "kwargs",
    [dict(population_size=3), dict(population_size=7), dict(generations=-1), dict(crossover_rate=1.5), dict(mutation_rate=-0.1), dict(tournament_size=0)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        SolverConfig(**kwargs)


# -- properties ------------------------------------------------------------


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_elitism_is_monotone(seed):
    rng = np.random.default_rng(seed)
    player = random_small_player(rng, max_tasks=4, max_starts=16, prosumer=bool(rng.integers(2)))
    front = evolve(player, rng.uniform(0, 30, 48), random_coeffs(rng), cfg=SolverConfig(population_size=8, generations=6, rng_seed=seed))
    hist = np.array(front.history)
    assert (np.diff(hist[:, 1]) <= 0).all()
    assert (np.diff(hist[:, 2]) <= 0).all()
    assert (hist[:, 3] == 1.0).all()
