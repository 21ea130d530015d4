"""Structure-quality metrics and the exhaustive score-landscape study."""

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .citest import DEPENDENCE, INDEPENDENCE, Assertion, TestCache, cached_test
from .graph import all_pairs, structure_to_index, u_separated
from .search import HCOptions, ibmap_hc

F_MODES = ("edges", "nonedges", "triplets")


@dataclass
class TripletSample:
    """Conditioning-set-stratified sample of (x, y, z) triplets, x < y."""

    n: int
    triplets: list

    def __len__(self):
        return len(self.triplets)


def _f_from_sets(learned_pos, true_pos):
    if not learned_pos and not true_pos:
        return 1.0
    tp = len(learned_pos & true_pos)
    precision = tp / len(learned_pos) if learned_pos else 0.0
    recall = tp / len(true_pos) if true_pos else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def f_measure(g_learned, g_true, mode="edges", sample=None):
    """Harmonic mean of precision and recall of ``g_learned`` vs ``g_true``.

    ``edges`` scores the learned edge set, ``nonedges`` its complement,
    and ``triplets`` the separation decisions over ``sample``.  The
    measure is directional: precision is over what was learned, recall
    over what is true.
    """
    if g_learned.n != g_true.n:
        raise ValueError("structures must have the same number of nodes")
    if mode == "edges":
        return _f_from_sets(set(g_learned.edges()), set(g_true.edges()))
    if mode == "nonedges":
        pairs = set(all_pairs(g_learned.n))
        return _f_from_sets(pairs - set(g_learned.edges()), pairs - set(g_true.edges()))
    if mode == "triplets":
        if sample is None:
            raise ValueError("triplets mode requires a TripletSample")
        learned_pos = set()
        true_pos = set()
        for t in sample.triplets:
            x, y, z = t
            if u_separated(g_learned, x, y, z):
                learned_pos.add(t)
            if u_separated(g_true, x, y, z):
                true_pos.add(t)
        return _f_from_sets(learned_pos, true_pos)
    raise ValueError(f"unknown mode {mode!r}")


def sample_triplets(n, per_cardinality, max_card=None, seed=0):
    """Uniform distinct triplets, ``per_cardinality`` per conditioning size.

    Cardinalities run from 0 to ``max_card`` (default n-2).  When the
    request meets or exceeds the number of distinct triplets at some
    cardinality, that stratum is enumerated exhaustively instead.
    """
    if per_cardinality < 1:
        raise ValueError("per_cardinality must be positive")
    if n < 2:
        raise ValueError("need at least two variables")
    if max_card is None:
        max_card = n - 2
    if max_card > n - 2:
        raise ValueError("conditioning sets cannot exceed n-2 variables")
    rng = np.random.default_rng(seed)
    pairs = all_pairs(n)
    triplets = []
    for card in range(max_card + 1):
        total = len(pairs) * comb(n - 2, card)
        if per_cardinality >= total:
            for x, y in pairs:
                rest = [w for w in range(n) if w != x and w != y]
                for z in itertools.combinations(rest, card):
                    triplets.append((x, y, z))
            continue
        seen = set()
        while len(seen) < per_cardinality:
            x, y = pairs[rng.integers(len(pairs))]
            rest = [w for w in range(n) if w != x and w != y]
            picks = sorted(rng.choice(len(rest), size=card, replace=False))
            seen.add((x, y, tuple(rest[i] for i in picks)))
        triplets.extend(sorted(seen))
    return TripletSample(n=n, triplets=triplets)


def accuracy(d_test, g, sample, alpha=1.0, cache=None):
    """Fraction of triplets where the data-side test and the graph agree.

    The data side declares independence when the posterior exceeds 1/2;
    the graph side uses vertex separation.
    """
    if d_test.n_vars != g.n:
        raise ValueError("dataset and structure disagree on variable count")
    cache = cache if cache is not None else TestCache(alpha=alpha)
    matches = 0
    for x, y, z in sample.triplets:
        out = cache.outcome(d_test, x, y, z)
        data_ind = out.log_p_ind > out.log_p_dep
        graph_ind = u_separated(g, x, y, z)
        if data_ind == graph_ind:
            matches += 1
    return matches / len(sample.triplets)


@dataclass
class LandscapeResult:
    """Exact score of every structure, indexed by the pair-bit counter."""

    n: int
    scores: np.ndarray  # float, one entry per structure index
    hamming: np.ndarray  # int, distance to the generating structure
    best_index: int
    hc_index: int
    hc_result: object

    @property
    def best_score(self):
        return float(self.scores[self.best_index])

    @property
    def hc_score(self):
        return float(self.scores[self.hc_index])

    @property
    def hc_hamming(self):
        return int(self.hamming[self.hc_index])

    def records(self):
        for i in range(self.scores.shape[0]):
            yield i, float(self.scores[i]), int(self.hamming[i])


def landscape(d, g_true, alpha=1.0, hc_options=None):
    """Score the complete structure space against ``d``.

    Every needed test outcome is shared through one cache: for each
    ordered pair only 2^(n-2) conditioning sets exist, so the whole
    space costs a few hundred distinct tests.  The hill climber runs on
    the same cache and its position in the landscape is reported.
    """
    n = g_true.n
    if d.n_vars != n:
        raise ValueError("dataset and structure disagree on variable count")
    pairs = all_pairs(n)
    if n > 6:
        raise ValueError("landscape enumeration limited to n <= 6")
    pair_bit = {p: t for t, p in enumerate(pairs)}
    cache = TestCache(alpha=alpha)
    size = 1 << len(pairs)
    idx = np.arange(size, dtype=np.int64)
    totals = np.zeros(size)

    for x in range(n):
        for y in range(n):
            if y == x:
                continue
            rest = [w for w in range(n) if w != x and w != y]
            bit_xy = pair_bit[(min(x, y), max(x, y))]
            zmask = np.zeros(size, dtype=np.int64)
            for k, w in enumerate(rest):
                bit_xw = pair_bit[(min(x, w), max(x, w))]
                zmask |= ((idx >> bit_xw) & 1) << k
            t_ind = np.empty(1 << len(rest))
            t_dep = np.empty(1 << len(rest))
            for mask in range(1 << len(rest)):
                z = tuple(w for k, w in enumerate(rest) if (mask >> k) & 1)
                t_ind[mask] = cached_test(cache, d, Assertion(x, y, z, INDEPENDENCE))
                t_dep[mask] = cached_test(cache, d, Assertion(x, y, z, DEPENDENCE))
            edge_bit = (idx >> bit_xy) & 1
            totals += np.where(edge_bit == 1, t_dep[zmask], t_ind[zmask])

    true_index = structure_to_index(g_true, pairs)
    diff = idx ^ true_index
    dist = np.zeros(size, dtype=np.int32)
    for t in range(len(pairs)):
        dist += ((diff >> t) & 1).astype(np.int32)

    hc = ibmap_hc(d, options=hc_options or HCOptions(alpha=alpha), cache=cache)
    hc_index = structure_to_index(hc.structure, pairs)
    return LandscapeResult(
        n=n,
        scores=totals,
        hamming=dist,
        best_index=int(np.argmax(totals)),
        hc_index=hc_index,
        hc_result=hc,
    )
