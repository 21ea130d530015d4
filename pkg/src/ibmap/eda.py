"""Estimation-of-distribution optimizer with pluggable structure learners.

Each generation the best half of the population is treated as a sample
of a distribution whose independence structure is learned (either by
the score hill climber or by a top-k mutual-information rule); new
individuals are then drawn with a structure-only Gibbs step that
resamples every gene from its empirical blanket conditional.  Elites
carry their fitness forward, so the evaluation count per generation is
the offspring count.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .graph import Structure
from .search import HCOptions, ibmap_hc
from .seeding import derive_seed

POPULATION_LADDER = (50, 100, 200, 400, 800, 1600, 3200)


def _as_bits(bits):
    if isinstance(bits, str):
        return [int(c) for c in bits]
    return list(bits)


def onemax(bits):
    """Number of ones in the string."""
    bits = _as_bits(bits)
    if not bits:
        raise ValueError("empty bit-string")
    return int(sum(bits))


def royal_road(bits, gamma):
    """Group-counted ones: each all-ones block of size gamma scores gamma."""
    bits = _as_bits(bits)
    if not bits:
        raise ValueError("empty bit-string")
    if gamma < 1 or len(bits) % gamma != 0:
        raise ValueError("gamma must divide the string length")
    total = 0
    for start in range(0, len(bits), gamma):
        if all(bits[start : start + gamma]):
            total += gamma
    return total


@dataclass
class Population:
    individuals: np.ndarray  # (size, n) int8
    fitnesses: np.ndarray  # (size,) int64


@dataclass
class EdaConfig:
    n: int
    population_size: int
    fitness: str = "onemax"  # onemax | royal_road
    gamma: int = 4
    learner: str = "ibmap_hc"  # ibmap_hc | mi
    k: int = 1
    mi_threshold: float = 0.02
    selection_fraction: float = 0.5
    elitism_fraction: float = 0.5
    max_generations: int = 1000
    alpha: float = 1.0
    seed: int = 0

    def fitness_function(self):
        if self.fitness == "onemax":
            return onemax
        if self.fitness == "royal_road":
            if self.n % self.gamma != 0:
                raise ValueError("gamma must divide n for royal_road")
            return lambda bits: royal_road(bits, self.gamma)
        raise ValueError(f"unknown fitness {self.fitness!r}")


@dataclass
class RunResult:
    success: bool
    generations: int
    f_star: int
    best_trace: list = field(default_factory=list)


def pairwise_mutual_information(individuals):
    """Empirical pairwise MI matrix (nats) of a binary population."""
    d, n = individuals.shape
    x = individuals.astype(np.float64)
    p1 = x.mean(axis=0)
    p11 = (x.T @ x) / d
    mi = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            cells = {
                (1, 1): p11[i, j],
                (1, 0): p1[i] - p11[i, j],
                (0, 1): p1[j] - p11[i, j],
                (0, 0): 1.0 - p1[i] - p1[j] + p11[i, j],
            }
            total = 0.0
            for (a, b), p in cells.items():
                if p > 0.0:
                    pa = p1[i] if a else 1.0 - p1[i]
                    pb = p1[j] if b else 1.0 - p1[j]
                    total += p * math.log(p / (pa * pb))
            mi[i, j] = mi[j, i] = max(total, 0.0)
    return mi


def mi_structure(pop, k, threshold=0.02):
    """Structure from top-k pairwise MI per variable, OR-combined.

    Each variable keeps at most ``k`` partners with MI above
    ``threshold``; ties break on the lower index.  Because blankets are
    merged by OR, final degrees may exceed ``k``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    individuals = pop.individuals
    n = individuals.shape[1]
    g = Structure(n)
    if k == 0:
        return g
    mi = pairwise_mutual_information(individuals)
    for x in range(n):
        partners = sorted(
            (y for y in range(n) if y != x and mi[x, y] > threshold),
            key=lambda y: (-mi[x, y], y),
        )
        for y in partners[:k]:
            if not g.has_edge(x, y):
                g.add_edge(x, y)
    return g


def structure_gibbs_offspring(pop, g, count, seed):
    """Draw offspring by one structure-only Gibbs sweep per individual.

    Each offspring starts as a uniformly chosen member of ``pop``, then
    every gene is resampled in random order from the add-1-smoothed
    empirical conditional of that gene given its blanket assignment in
    the population; blanket assignments never observed fall back to the
    empirical marginal.
    """
    if count < 1:
        raise ValueError("count must be positive")
    individuals = pop.individuals
    if individuals.shape[0] == 0:
        raise ValueError("population is empty")
    d, n = individuals.shape
    rng = np.random.default_rng(seed)

    blankets = []
    tables = []
    marginals = individuals.mean(axis=0)
    for x in range(n):
        b = sorted(g.blanket(x))
        blankets.append(b)
        if b:
            codes = np.zeros(d, dtype=np.int64)
            for kbit, w in enumerate(b):
                codes |= individuals[:, w].astype(np.int64) << kbit
        else:
            codes = np.zeros(d, dtype=np.int64)
        uniq, inv = np.unique(codes, return_inverse=True)
        totals = np.bincount(inv)
        ones = np.bincount(inv, weights=individuals[:, x]).astype(np.int64)
        tables.append(dict(zip(uniq.tolist(), zip(ones.tolist(), totals.tolist()))))

    out = np.empty((count, n), dtype=np.int8)
    for r in range(count):
        state = individuals[rng.integers(d)].copy()
        for x in rng.permutation(n):
            code = 0
            for kbit, w in enumerate(blankets[x]):
                code |= int(state[w]) << kbit
            entry = tables[x].get(code)
            if entry is None:
                p1 = marginals[x]
            else:
                n1, ntot = entry
                p1 = (n1 + 1.0) / (ntot + 2.0)
            state[x] = 1 if rng.random() < p1 else 0
        out[r] = state
    return out


def _learn_structure(cfg, selected):
    if cfg.learner == "ibmap_hc":
        names = [f"G{i}" for i in range(selected.shape[1])]
        ds = Dataset(names, [selected[:, j] for j in range(selected.shape[1])],
                     arities=[2] * selected.shape[1])
        return ibmap_hc(ds, options=HCOptions(alpha=cfg.alpha)).structure
    if cfg.learner == "mi":
        return mi_structure(Population(selected, None), cfg.k, cfg.mi_threshold)
    raise ValueError(f"unknown learner {cfg.learner!r}")


def moa_run(cfg):
    """One optimizer run: returns success flag, generations and f*.

    Per generation: truncation-select the top fraction, learn a
    structure from the selected set, sample the offspring half, carry
    the elite half with cached fitness, and evaluate only the offspring.
    f* therefore equals D + offspring_count * generations.
    """
    if not 0.0 < cfg.selection_fraction <= 1.0 or not 0.0 < cfg.elitism_fraction <= 1.0:
        raise ValueError("fractions must lie in (0, 1]")
    fit = cfg.fitness_function()
    n = cfg.n
    dsize = cfg.population_size
    sel_count = max(1, int(dsize * cfg.selection_fraction))
    elite_count = max(1, int(dsize * cfg.elitism_fraction))
    offspring_count = dsize - elite_count
    optimum = n

    rng = np.random.default_rng(cfg.seed)
    individuals = rng.integers(0, 2, size=(dsize, n), dtype=np.int8)
    fitnesses = np.array([fit(ind) for ind in individuals], dtype=np.int64)
    f_star = dsize
    best_trace = [int(fitnesses.max())]
    generations = 0
    success = best_trace[-1] == optimum

    while not success and generations < cfg.max_generations:
        order = np.argsort(-fitnesses, kind="stable")
        selected = individuals[order[:sel_count]]
        sel_fit = fitnesses[order[:sel_count]]
        g = _learn_structure(cfg, selected)
        offspring = structure_gibbs_offspring(
            Population(selected, sel_fit),
            g,
            offspring_count,
            int(rng.integers(1 << 63)),
        )
        off_fit = np.array([fit(ind) for ind in offspring], dtype=np.int64)
        f_star += offspring_count
        individuals = np.vstack([individuals[order[:elite_count]], offspring])
        fitnesses = np.concatenate([fitnesses[order[:elite_count]], off_fit])
        generations += 1
        best_trace.append(int(fitnesses.max()))
        success = best_trace[-1] == optimum

    return RunResult(
        success=success,
        generations=generations,
        f_star=f_star,
        best_trace=best_trace,
    )


@dataclass
class CriticalPopulationResult:
    d_star: int  # None when no rung reaches a perfect success rate
    f_star_mean: float
    f_star_std: float
    rungs: list  # (population size, successes, mean f*) per rung tried


def critical_population_search(cfg, ladder=POPULATION_LADDER, repetitions=10):
    """Smallest ladder rung where every seeded repetition finds the optimum.

    Stops at the first rung with ``repetitions``/``repetitions``
    successes and reports the f* statistics there; rungs are tried in
    ascending order.
    """
    from dataclasses import replace

    rungs = []
    for dsize in sorted(ladder):
        results = [
            moa_run(replace(cfg, population_size=dsize,
                            seed=derive_seed(cfg.seed, dsize, rep)))
            for rep in range(repetitions)
        ]
        successes = sum(r.success for r in results)
        f_stars = np.array([r.f_star for r in results], dtype=np.float64)
        rungs.append((dsize, successes, float(f_stars.mean())))
        if successes == repetitions:
            return CriticalPopulationResult(
                d_star=dsize,
                f_star_mean=float(f_stars.mean()),
                f_star_std=float(f_stars.std(ddof=1)) if repetitions > 1 else 0.0,
                rungs=rungs,
            )
    return CriticalPopulationResult(
        d_star=None, f_star_mean=float("nan"), f_star_std=float("nan"), rungs=rungs
    )
