"""Blanket-closure construction and the decomposable structure score.

The score of a candidate structure is the sum, over all ordered variable
pairs, of the log posterior of the (in)dependence assertion the
structure implies for that pair: a dependence assertion conditioned on
the first variable's blanket minus the partner when the pair is an
edge, an independence assertion conditioned on the full blanket when it
is not.  Grouping the ordered pairs by first variable gives one
"variable score" per node, which is what makes single-edge rescoring an
O(n)-test operation: flipping (x, y) only perturbs the blankets of x
and y, so only their two variable scores change.
"""

from dataclasses import dataclass

from .citest import DEPENDENCE, INDEPENDENCE, Assertion, cached_test


@dataclass
class ScoreState:
    """Total score plus the per-variable decomposition that produced it."""

    per_variable: list
    total: float


def pair_assertion(g, x, y):
    """The closure assertion the structure implies for ordered pair (x, y)."""
    blanket = g.blanket(x)
    if g.has_edge(x, y):
        blanket.discard(y)
        return Assertion(x, y, tuple(blanket), DEPENDENCE)
    return Assertion(x, y, tuple(blanket), INDEPENDENCE)


def mb_closure(g):
    """All n(n-1) ordered-pair assertions determined by ``g``'s blankets."""
    out = []
    for x in range(g.n):
        for y in range(g.n):
            if y != x:
                out.append(pair_assertion(g, x, y))
    return out


def sigma_xy(d, g, x, y, cache):
    """Log posterior of the closure assertion for ordered pair (x, y)."""
    return cached_test(cache, d, pair_assertion(g, x, y))


def variable_score(d, g, x, cache):
    """Sum of sigma_xy over the n-1 partners of ``x``."""
    total = 0.0
    for y in range(g.n):
        if y != x:
            total += sigma_xy(d, g, x, y, cache)
    return total


def ib_score(d, g, cache):
    """Score ``g`` from scratch: one variable score per node, then the sum."""
    if d.n_vars != g.n:
        raise ValueError("dataset and structure disagree on variable count")
    per_variable = [variable_score(d, g, x, cache) for x in range(g.n)]
    return ScoreState(per_variable=per_variable, total=sum(per_variable))


def rescore_after_flip(d, g, state, x, y, cache):
    """ScoreState of ``g`` with edge (x, y) flipped, reusing ``state``.

    Only the variable scores of ``x`` and ``y`` are recomputed; the
    remaining entries are carried over unchanged.  ``state`` must be the
    exact ScoreState of ``g`` (stale input is undetectable here).
    """
    flipped = g.flip_edge(x, y)
    per_variable = list(state.per_variable)
    per_variable[x] = variable_score(d, flipped, x, cache)
    per_variable[y] = variable_score(d, flipped, y, cache)
    return ScoreState(per_variable=per_variable, total=sum(per_variable))
