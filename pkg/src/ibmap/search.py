"""Hill-climbing maximization of the structure score.

The search starts from the empty structure, repeatedly flips the single
edge whose two ordered-pair terms contribute least to the current score
(the flip most likely to raise it), rescores incrementally, and stops at
the first strict decrease.  Selecting the flip reads only cached test
outcomes, so an iteration costs O(n) new tests and the selection itself
costs none.
"""

from dataclasses import dataclass, field

from .citest import INDEPENDENCE, TestCache
from .graph import Structure, all_pairs
from .ibscore import ib_score, pair_assertion, rescore_after_flip


@dataclass
class HCOptions:
    alpha: float = 1.0
    max_iterations: int = None  # default 10 * n**2, set at run time
    warm_start: Structure = None


@dataclass
class SearchResult:
    structure: Structure
    score: object
    ascents: int
    tests_computed: int
    cache_hits: int = 0
    converged: bool = True
    trace: list = field(default_factory=list)


def _cached_pair_value(cache, g, x, y):
    a = pair_assertion(g, x, y)
    out = cache.peek(a.x, a.y, a.z)
    if out is None:
        raise LookupError(
            f"pair ({x},{y}) not in cache; score the structure before selecting"
        )
    return out.log_p_ind if a.kind == INDEPENDENCE else out.log_p_dep


def select_next_structure(g, state, cache):
    """Pair whose flip the heuristic predicts improves the score most.

    Scans all unordered pairs for the minimum of the two ordered-pair
    terms, using only cached outcomes (zero test computations).  Ties
    break lexicographically.
    """
    best = None
    best_value = None
    for x, y in all_pairs(g.n):
        value = _cached_pair_value(cache, g, x, y) + _cached_pair_value(cache, g, y, x)
        if best_value is None or value < best_value:
            best = (x, y)
            best_value = value
    return best


def ibmap_hc(d, options=None, cache=None):
    """Learn a structure for ``d`` by score hill climbing.

    Equal-score neighbors are accepted (the stop condition is a strict
    decrease), so a visited-set guard on the current plateau prevents
    cycling; the guard resets whenever the score strictly improves.
    Deterministic given the dataset.
    """
    options = options or HCOptions()
    cache = cache if cache is not None else TestCache(alpha=options.alpha)
    n = d.n_vars
    g = options.warm_start.copy() if options.warm_start is not None else Structure(n)
    state = ib_score(d, g, cache)
    max_iterations = options.max_iterations
    if max_iterations is None:
        max_iterations = 10 * n * n

    ascents = 0
    trace = [state.total]
    plateau = {g.key()}
    converged = False
    for _ in range(max_iterations):
        x, y = select_next_structure(g, state, cache)
        candidate = g.flip_edge(x, y)
        candidate_state = rescore_after_flip(d, g, state, x, y, cache)
        if candidate_state.total < state.total:
            converged = True
            break
        if candidate_state.total == state.total:
            if candidate.key() in plateau:
                converged = True
                break
            plateau.add(candidate.key())
        else:
            plateau = {candidate.key()}
        g = candidate
        state = candidate_state
        ascents += 1
        trace.append(state.total)

    return SearchResult(
        structure=g,
        score=state,
        ascents=ascents,
        tests_computed=cache.tests_computed,
        cache_hits=cache.cache_hits,
        converged=converged,
        trace=trace,
    )
