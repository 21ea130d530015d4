"""Grow-shrink blanket learner (GSMN-style) used as the comparison baseline.

Each boolean decision thresholds the Bayesian test posterior at 1/2, so
a single wrong outcome propagates, which is exactly the failure mode the
score-based search is designed to avoid.  Tests run through the same
TestCache type as the hill climber, keeping test-count comparisons
like-for-like.
"""

from dataclasses import dataclass

from .citest import TestCache
from .graph import Structure
from .ibscore import ib_score
from .search import SearchResult


@dataclass
class GsmnOptions:
    alpha: float = 1.0
    and_combination: bool = False  # default OR: an edge if either endpoint claims it
    score_result: bool = True


def gsmn(d, options=None, cache=None, trace=None):
    """Learn a structure by per-variable grow-shrink blanket discovery.

    Grow visits candidates in descending order of pairwise dependence
    posterior with the target, admitting any candidate found dependent
    given the current blanket estimate; shrink then re-tests members
    given the rest until stable.  Blankets are merged into edges by OR
    (AND behind an option).  ``trace``, when a list, receives one
    ``(x, y, conditioning, "dep"|"ind")`` entry per boolean decision.
    """
    options = options or GsmnOptions()
    cache = cache if cache is not None else TestCache(alpha=options.alpha)
    n = d.n_vars

    def dependent(x, y, cond):
        out = cache.outcome(d, x, y, cond)
        dep = out.log_p_dep > out.log_p_ind
        if trace is not None:
            trace.append((x, y, tuple(sorted(cond)), "dep" if dep else "ind"))
        return dep

    blankets = []
    for x in range(n):
        order = sorted(
            (y for y in range(n) if y != x),
            key=lambda y: (-cache.outcome(d, x, y, ()).log_p_dep, y),
        )
        b = []
        for y in order:
            if dependent(x, y, b):
                b.append(y)
        changed = True
        while changed:
            changed = False
            for y in list(b):
                rest = [w for w in b if w != y]
                if not dependent(x, y, rest):
                    b.remove(y)
                    changed = True
                    break
        blankets.append(set(b))

    g = Structure(n)
    for x in range(n):
        for y in range(x + 1, n):
            claimed = (y in blankets[x], x in blankets[y])
            edge = all(claimed) if options.and_combination else any(claimed)
            if edge:
                g.add_edge(x, y)

    tests_for_learning = cache.tests_computed
    hits_for_learning = cache.cache_hits
    score = ib_score(d, g, cache) if options.score_result else None
    return SearchResult(
        structure=g,
        score=score,
        ascents=0,
        tests_computed=tests_for_learning,
        cache_hits=hits_for_learning,
    )
