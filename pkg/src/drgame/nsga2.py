"""NSGA-II over integer start-slot genes and final strategy selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .domain import Schedule, TimeGrid
from .exceptions import EmptyFront, UnevaluatedChromosome, ValidationError
from .objectives import ObjectiveVector, Player, PlayerProblem
from .pricing import CostCoefficients
from .validation import check_profile, check_weights


@dataclass(eq=False)
class Chromosome:
    genes: np.ndarray
    objectives: ObjectiveVector | None = None
    rank: int | None = None
    crowding: float = 0.0

    def __post_init__(self):
        self.genes = np.asarray(self.genes, dtype=np.int64)

    def key(self) -> tuple[int, ...]:
        return tuple(int(g) for g in self.genes)

    def schedule(self, player: Player) -> Schedule:
        return Schedule.from_genes(player.tasks, self.genes)


@dataclass(frozen=True)
class SolverConfig:
    population_size: int = 100
    generations: int = 200
    crossover_rate: float = 0.9
    mutation_rate: float | None = None  # None -> 1 / number of tasks
    tournament_size: int = 2
    rng_seed: int = 0
    selection_weights: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValidationError("population_size must be even and at least 4")
        if self.generations < 0:
            raise ValidationError("generations must be non-negative")
        if self.tournament_size < 1:
            raise ValidationError("tournament_size must be at least 1")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if rate is not None and not 0 <= rate <= 1:
                raise ValidationError(f"{name} must lie in [0, 1]")
        object.__setattr__(self, "selection_weights", check_weights(self.selection_weights))


@dataclass
class ParetoFront:
    members: list[Chromosome]
    # (generation, best cost, best discomfort, feasible fraction) per generation
    history: list[tuple[int, float, float, float]] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def objectives(self) -> np.ndarray:
        return np.array([m.objectives for m in self.members], dtype=float).reshape(-1, 2)

    def genes(self) -> np.ndarray:
        return np.array([m.genes for m in self.members])


class Scale(NamedTuple):
    """Min-max normalisation bounds used to scalarise objective vectors."""

    cost_min: float
    cost_range: float
    discomfort_min: float
    discomfort_range: float

    @classmethod
    def of(cls, objectives: np.ndarray) -> "Scale":
        F = np.asarray(objectives, dtype=float).reshape(-1, 2)
        lo, hi = F.min(axis=0), F.max(axis=0)
        span = hi - lo
        span[span <= 0] = 1.0
        return cls(float(lo[0]), float(span[0]), float(lo[1]), float(span[1]))

    def score(self, objectives, weights) -> np.ndarray:
        F = np.asarray(objectives, dtype=float).reshape(-1, 2)
        w_cost, w_disc = weights
        return (
            w_cost * (F[:, 0] - self.cost_min) / self.cost_range
            + w_disc * (F[:, 1] - self.discomfort_min) / self.discomfort_range
        )


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is true when row ``i`` dominates row ``j``."""
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    return le & lt


def fast_non_dominated_sort(F: np.ndarray) -> list[np.ndarray]:
    """Front index lists, front 0 first.

    Bi-objective sweep: rows are visited in lexicographic order and each goes
    to the first front whose most recent member does not dominate it, found by
    binary search. Within a front that member has the smallest second
    objective, so checking it alone is sufficient.
    """
    F = np.asarray(F, dtype=float)
    if len(F) == 0:
        return []
    if F.shape[1] != 2:
        return _peel_fronts(F)
    order = np.lexsort((F[:, 1], F[:, 0]))
    last: list[tuple[float, float]] = []
    assignment = np.empty(len(F), dtype=np.int64)
    for i, (f1, f2) in zip(order, F[order].tolist()):
        lo, hi = 0, len(last)
        while lo < hi:
            mid = (lo + hi) // 2
            q1, q2 = last[mid]
            if q2 < f2 or (q2 == f2 and q1 < f1):
                lo = mid + 1
            else:
                hi = mid
        if lo == len(last):
            last.append((f1, f2))
        else:
            last[lo] = (f1, f2)
        assignment[i] = lo
    return [np.flatnonzero(assignment == k) for k in range(len(last))]


def _peel_fronts(F: np.ndarray) -> list[np.ndarray]:
    D = dominance_matrix(F)
    counts = D.sum(axis=0)
    remaining = np.ones(len(F), dtype=bool)
    fronts = []
    while remaining.any():
        front = np.flatnonzero(remaining & (counts == 0))
        fronts.append(front)
        remaining[front] = False
        counts = counts - D[front].sum(axis=0)
    return fronts


def crowding_distances(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    m = len(F)
    if m <= 2:
        return np.full(m, np.inf)
    dist = np.zeros(m)
    for k in range(F.shape[1]):
        values = F[:, k]
        span = values.max() - values.min()
        if span <= 0:
            continue
        order = np.argsort(values, kind="stable")
        dist[order[0]] = dist[order[-1]] = np.inf
        gaps = (values[order[2:]] - values[order[:-2]]) / span
        dist[order[1:-1]] += gaps
    return dist


def non_dominated_sort(population: Sequence[Chromosome]) -> list[list[Chromosome]]:
    """Partition ``population`` into fronts and set each member's rank."""
    if any(c.objectives is None for c in population):
        raise UnevaluatedChromosome("every chromosome needs objectives before sorting")
    F = np.array([c.objectives for c in population], dtype=float).reshape(-1, 2)
    fronts = []
    for rank, idx in enumerate(fast_non_dominated_sort(F)):
        members = [population[i] for i in idx]
        for c in members:
            c.rank = rank
        fronts.append(members)
    return fronts


def crowding_distance(front: Sequence[Chromosome]) -> np.ndarray:
    if any(c.objectives is None for c in front):
        raise UnevaluatedChromosome("every chromosome needs objectives")
    dist = crowding_distances(np.array([c.objectives for c in front], dtype=float).reshape(-1, 2))
    for c, d in zip(front, dist):
        c.crowding = float(d)
    return dist


def _unique_rows(genes: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of every distinct row, in original order."""
    genes = np.ascontiguousarray(genes)
    seen = {}
    for i, row in enumerate(genes):
        seen.setdefault(row.tobytes(), i)
    return np.fromiter(seen.values(), dtype=np.int64, count=len(seen))


def _environmental_selection(genes, F, size):
    """Keep ``size`` rows by (rank, crowding); duplicate genomes go last."""
    unique = _unique_rows(genes)
    rank = np.full(len(genes), np.iinfo(np.int64).max, dtype=np.int64)
    crowd = np.zeros(len(genes))
    chosen = []
    for r, front in enumerate(fast_non_dominated_sort(F[unique])):
        members = unique[front]
        cd = crowding_distances(F[members])
        rank[members] = r
        crowd[members] = cd
        room = size - len(chosen)
        if len(members) <= room:
            chosen.extend(members)
        else:
            order = np.argsort(-cd, kind="stable")
            chosen.extend(members[order[:room]])
        if len(chosen) == size:
            break
    if len(chosen) < size:
        duplicates = np.setdiff1d(np.arange(len(genes)), unique)
        chosen.extend(duplicates[: size - len(chosen)])
    chosen = np.array(chosen)
    return genes[chosen], F[chosen], rank[chosen], crowd[chosen]


def _tournament(rank, crowd, count, size, rng):
    candidates = rng.integers(0, len(rank), size=(count, size))
    best = candidates[:, 0]
    for c in range(1, size):
        challenger = candidates[:, c]
        better = (rank[challenger] < rank[best]) | (
            (rank[challenger] == rank[best]) & (crowd[challenger] > crowd[best])
        )
        best = np.where(better, challenger, best)
    return best


def _variation(parents, problem, crossover_rate, mutation_rate, rng):
    half = len(parents) // 2
    g1, g2 = parents[:half], parents[half:]
    do_cross = rng.random(half) < crossover_rate
    swap = (rng.random(g1.shape) < 0.5) & do_cross[:, None]
    children = np.vstack([np.where(swap, g2, g1), np.where(swap, g1, g2)])
    mutate = rng.random(children.shape) < mutation_rate
    if mutate.any():
        children = np.where(mutate, problem.random_genes(rng, len(children)), children)
    return problem.repair(children)


def evolve(
    player: Player,
    others_load,
    coeffs: CostCoefficients,
    grid: TimeGrid = TimeGrid(),
    cfg: SolverConfig = SolverConfig(),
    incumbent=None,
    problem: PlayerProblem | None = None,
    rng: np.random.Generator | None = None,
) -> ParetoFront:
    """Run NSGA-II for one player against a frozen load of the other players.

    The initial population holds the all-preferred and all-earliest schedules,
    the ``incumbent`` genes when given, and uniform random feasible schedules.
    The returned front is the non-dominated set of the final population merged
    with those anchors, so the incumbent is never lost.
    """
    if problem is None:
        problem = PlayerProblem(player, grid)
    others_load = check_profile(others_load, grid.slots_per_day, "others_load")
    if rng is None:
        rng = np.random.default_rng(cfg.rng_seed)
    size = cfg.population_size
    mutation_rate = cfg.mutation_rate
    if mutation_rate is None:
        mutation_rate = 1.0 / max(problem.n_tasks, 1)

    anchors = [problem.preferred_genes(), problem.earliest_genes()]
    if incumbent is not None:
        anchors.append(np.asarray(incumbent, dtype=np.int64))
    anchors = np.array(anchors, dtype=np.int64).reshape(len(anchors), problem.n_tasks)
    anchor_F = problem.evaluate_genes(anchors, others_load, coeffs)

    genes = np.vstack([anchors, problem.random_genes(rng, size - len(anchors))])
    F = np.vstack([anchor_F, problem.evaluate_genes(genes[len(anchors):], others_load, coeffs)])
    genes, F, rank, crowd = _environmental_selection(genes, F, size)
    history = [(0, float(F[:, 0].min()), float(F[:, 1].min()), 1.0)]

    for gen in range(1, cfg.generations + 1):
        parents = genes[_tournament(rank, crowd, size, cfg.tournament_size, rng)]
        children = _variation(parents, problem, cfg.crossover_rate, mutation_rate, rng)
        child_F = problem.evaluate_genes(children, others_load, coeffs)
        genes, F, rank, crowd = _environmental_selection(
            np.vstack([genes, children]), np.vstack([F, child_F]), size
        )
        history.append((gen, float(F[:, 0].min()), float(F[:, 1].min()), float(problem.is_feasible(genes).mean())))

    pool = np.vstack([genes, anchors])
    pool_F = np.vstack([F, anchor_F])
    unique = _unique_rows(pool)
    first = unique[fast_non_dominated_sort(pool_F[unique])[0]]
    order = sorted(first, key=lambda i: (pool_F[i, 0], pool_F[i, 1], tuple(pool[i])))
    members = [
        Chromosome(pool[i].copy(), ObjectiveVector(float(pool_F[i, 0]), float(pool_F[i, 1])), rank=0)
        for i in order
    ]
    crowding_distance(members)
    return ParetoFront(members, history)


def select_strategy(front: ParetoFront | Sequence[Chromosome], weights=(0.5, 0.5), scale: Scale | None = None) -> Chromosome:
    """Pick the member minimising the weighted sum of normalised objectives.

    Objectives are min-max normalised over the front unless ``scale`` fixes
    the bounds. Ties go to the lower raw cost, then the lexicographically
    smaller genes.
    """
    members = list(front)
    if not members:
        raise EmptyFront("cannot select a strategy from an empty front")
    weights = check_weights(weights)
    F = np.array([m.objectives for m in members], dtype=float).reshape(-1, 2)
    if scale is None:
        scale = Scale.of(F)
    scores = np.round(scale.score(F, weights), 12)
    best = min(range(len(members)), key=lambda i: (scores[i], F[i, 0], members[i].key()))
    return members[best]
