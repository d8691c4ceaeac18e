import numpy as np
import pytest

from drgame.catalog import read_catalog
from drgame.comfort import DiscomfortCoefficients
from drgame.domain import Task, TimeGrid
from drgame.objectives import CONSUMER, PROSUMER, Player
from drgame.pricing import CostCoefficients, GenerationProfile

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")


@pytest.fixture(scope="session")
def grid():
    return TimeGrid()


@pytest.fixture(scope="session")
def table1(grid):
    return {t.id: t for t in read_catalog(None, grid)}


def make_task(id="t", power=1.0, st=0, ft=48, dur=2, pst=None, pft=None):
    """Task in slot units; preferred window defaults to the admitted window."""
    pst = st if pst is None else pst
    pft = ft if pft is None else pft
    return Task(id, power, dur, st, ft, pst, pft)


def make_player(tasks, id="P0", kind=CONSUMER, generation=None, coeffs=DiscomfortCoefficients()):
    return Player(id, kind, tuple(tasks), generation, coeffs)


def flat_coeffs(grid=TimeGrid(), a=0.0, b=0.1, c=0.0):
    n = grid.slots_per_day
    return CostCoefficients(np.full(n, a), np.full(n, b), np.full(n, c))


def random_small_player(rng, grid=TimeGrid(), max_tasks=3, max_starts=6, id="P0", prosumer=False):
    """Player with at most ``max_tasks`` tasks and ``max_starts`` feasible starts each."""
    n = grid.slots_per_day
    tasks = []
    for j in range(int(rng.integers(1, max_tasks + 1))):
        dur = int(rng.integers(1, 4))
        extra = int(rng.integers(0, max_starts))
        st = int(rng.integers(0, n))
        ft = (st + dur + extra - 1) % n + 1
        width = dur + extra
        plen = int(rng.integers(dur, width + 1))
        poff = int(rng.integers(0, width - plen + 1))
        pst = (st + poff) % n
        pft = (st + poff + plen - 1) % n + 1
        tasks.append(Task(f"t{j}", float(rng.uniform(0.2, 3.0)), dur, st, ft, pst, pft))
    gen = None
    kind = CONSUMER
    if prosumer:
        kind = PROSUMER
        gen = GenerationProfile(rng.uniform(0, 1, n), 0.1)
    coeffs = DiscomfortCoefficients(float(rng.uniform(0.1, 2)), float(rng.uniform(0, 1)), float(rng.uniform(0, 0.5)))
    return Player(id, kind, tuple(tasks), gen, coeffs)


def random_coeffs(rng, grid=TimeGrid()):
    n = grid.slots_per_day
    return CostCoefficients(rng.uniform(0.0, 0.01, n), rng.uniform(0.05, 0.3, n), rng.uniform(0, 1, n))


def brute_force_pareto(problem, others_load, coeffs):
    """Enumerate every feasible schedule; return (genes, objectives) of the non-dominated ones."""
    import itertools

    genes = np.array(list(itertools.product(*problem.feasible)), dtype=np.int64)
    F = problem.evaluate_genes(genes, others_load, coeffs)
    keep = []
    for i in range(len(F)):
        dominated = np.any(np.all(F <= F[i], axis=1) & np.any(F < F[i], axis=1))
        if not dominated:
            keep.append(i)
    return genes[keep], F[keep]


def objective_set(F, digits=9):
    return {(round(float(c), digits), round(float(d), digits)) for c, d in np.asarray(F).reshape(-1, 2)}


def anti_coordination_game():
    """Two one-slot tasks sharing the two starts {10, 11}.

    The heavy player (1 kWh) and the light player (0.25 kWh) both prefer the
    cheaper slot 10, but sharing it costs the light player more than moving.
    The only pure equilibrium puts the heavy player at 10 and the light at 11.
    """
    b = np.full(48, 0.10)
    b[11] = 0.12
    coeffs = CostCoefficients(np.full(48, 0.05), b, np.zeros(48))
    heavy = Player("heavy", CONSUMER, (make_task("h", power=2.0, st=10, ft=12, dur=1),))
    light = Player("light", CONSUMER, (make_task("l", power=0.5, st=10, ft=12, dur=1),))
    return [heavy, light], coeffs


def enumerate_pure_nash(players, coeffs, grid=TimeGrid()):
    """Exhaustive best-response check over every joint profile of one-task players."""
    import itertools

    from drgame.domain import Schedule, feasible_starts, player_profile
    from drgame.objectives import evaluate

    options = [feasible_starts(p.tasks[0], grid) for p in players]

    def cost(i, profile):
        others = sum(
            player_profile(Schedule({players[k].tasks[0].id: profile[k]}), players[k].tasks, grid)
            for k in range(len(players)) if k != i
        )
        return evaluate(players[i], Schedule({players[i].tasks[0].id: profile[i]}), others, coeffs, grid).cost

    equilibria = []
    for profile in itertools.product(*options):
        stable = True
        for i in range(len(players)):
            for alt in options[i]:
                moved = list(profile)
                moved[i] = alt
                if cost(i, moved) < cost(i, profile) - 1e-12:
                    stable = False
        if stable:
            equilibria.append(tuple(int(x) for x in profile))
    return equilibria
