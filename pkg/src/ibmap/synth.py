"""Synthetic model generation and Gibbs sampling of datasets.

Ground-truth structures are either random (edge set drawn as the prefix
of a seeded permutation of all pairs) or planar 4-neighbor grids.  Each
edge carries a strictly positive 2x2 factor solved so that its log-odds
ratio equals a target epsilon; datasets are then drawn with a
single-site Gibbs sampler that needs only conditional ratios, never the
partition function.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import gibbs_chain
from .dataset import Dataset
from .graph import Structure, all_pairs

DEFAULT_EPSILON = 1.0
DEFAULT_BURN_IN = 100
DEFAULT_THIN = 9


@dataclass
class PairwiseModel:
    """A binary pairwise model: structure plus one 2x2 factor per edge."""

    structure: Structure
    factors: dict  # (i, j) with i < j -> ndarray shape (2, 2), all entries > 0


def random_structure(n, tau, seed):
    """Random structure with exactly floor(n*tau/2) edges.

    Edges are the prefix of a seeded uniform permutation of the
    lexicographic pair list, so mean degree is ``tau`` whenever
    ``n * tau / 2`` is integral.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    pairs = all_pairs(n)
    n_edges = int(n * tau / 2)
    if n_edges > len(pairs):
        raise ValueError(f"{n_edges} edges requested but only {len(pairs)} pairs exist")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pairs))
    return Structure.from_edges(n, [pairs[k] for k in order[:n_edges]])


def ising_structure(rows, cols):
    """Non-toroidal 4-neighbor grid over rows*cols nodes."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid must contain at least two nodes")
    g = Structure(rows * cols)
    for r in range(rows):
        for c in range(cols):
            node = r * cols + c
            if c + 1 < cols:
                g.add_edge(node, node + 1)
            if r + 1 < rows:
                g.add_edge(node, node + cols)
    return g


def solve_last_factor_entry(phi00, phi01, phi10, epsilon):
    """phi11 making log(phi00*phi11 / (phi01*phi10)) equal epsilon."""
    return math.exp(epsilon) * phi01 * phi10 / phi00


def log_odds(factor):
    return math.log(factor[0, 0] * factor[1, 1] / (factor[0, 1] * factor[1, 0]))


def pairwise_model(g, epsilon=DEFAULT_EPSILON, seed=0):
    """Draw a factor per edge with the required log-odds ratio.

    Three entries are uniform on (0, 1]; the fourth is solved from the
    log-odds constraint, which keeps every factor strictly positive.
    """
    rng = np.random.default_rng(seed)
    factors = {}
    for i, j in g.edges():
        phi00, phi01, phi10 = 1.0 - rng.random(3)
        phi11 = solve_last_factor_entry(phi00, phi01, phi10, epsilon)
        factors[(i, j)] = np.array([[phi00, phi01], [phi10, phi11]])
    return PairwiseModel(structure=g, factors=factors)


def _directed_tables(m):
    # CSR neighbor layout with one log-factor table per directed slot,
    # oriented [site_value][neighbor_value].
    g = m.structure
    n = g.n
    ptr = np.zeros(n + 1, dtype=np.int32)
    idx = []
    tabs = []
    for i in range(n):
        for j in sorted(g.blanket(i)):
            idx.append(j)
            factor = m.factors[(i, j) if i < j else (j, i)]
            tabs.append(factor if i < j else factor.T)
        ptr[i + 1] = len(idx)
    nbr_idx = np.asarray(idx, dtype=np.int32)
    if tabs:
        log_tab = np.log(np.ascontiguousarray(np.stack(tabs)))
    else:
        log_tab = np.empty((0, 2, 2))
    return ptr, nbr_idx, log_tab


def gibbs_sample(m, n_rows, burn_in=DEFAULT_BURN_IN, thin=DEFAULT_THIN, seed=0):
    """Dataset of ``n_rows`` rows sampled from ``m`` by single-site Gibbs.

    The state starts uniform at random; a sweep updates every variable in
    index order from its conditional given the current blanket values.
    After ``burn_in`` sweeps, one row is kept every ``thin + 1`` sweeps.
    Deterministic given the seed, independent of kernel backend.
    """
    if n_rows < 1:
        raise ValueError("n_rows must be positive")
    if burn_in < 0 or thin < 0:
        raise ValueError("burn_in and thin must be non-negative")
    g = m.structure
    n = g.n
    rng = np.random.default_rng(seed)
    init_state = rng.integers(0, 2, size=n, dtype=np.int8)
    n_sweeps = burn_in + n_rows * (thin + 1)
    uniforms = rng.random((n_sweeps, n))
    ptr, nbr_idx, log_tab = _directed_tables(m)
    rows = gibbs_chain(ptr, nbr_idx, log_tab, init_state, uniforms, burn_in, thin, n_rows)
    names = [f"X{i}" for i in range(n)]
    return Dataset(names, [rows[:, j] for j in range(n)], arities=[2] * n)


def exact_joint(m):
    """Brute-force normalized joint of a small model (oracle for the sampler)."""
    g = m.structure
    n = g.n
    if n > 16:
        raise ValueError("exact enumeration limited to n <= 16")
    probs = np.zeros(1 << n)
    for assignment in range(1 << n):
        bits = [(assignment >> i) & 1 for i in range(n)]
        p = 1.0
        for (i, j), factor in m.factors.items():
            p *= factor[bits[i], bits[j]]
        probs[assignment] = p
    return probs / probs.sum()
