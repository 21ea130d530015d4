"""Bayesian conditional-independence testing with a canonical-key cache.

Each test compares two hypotheses about a variable pair (X, Y) within
every observed assignment of a conditioning set Z: a full joint
multinomial over the X*Y cell table (dependence) against the product of
two marginal multinomials (independence), each under a symmetric
Dirichlet prior.  Evidence is accumulated in log space and converted to
a posterior with equal 1/2 priors on the two hypotheses.  The evidence
is well defined for any counts, including empty or sparse tables, so no
minimum-counts heuristic is applied.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dataset import _check_test_indices, contingency_counts

INDEPENDENCE = "independence"
DEPENDENCE = "dependence"

DEFAULT_ALPHA = 1.0

# Largest cell-code space routed to the grouping kernels; beyond this the
# mixed-radix encoding would overflow int64 and the dict-based counting
# path is used instead.
_CODE_CAPACITY = 1 << 62


@dataclass(frozen=True)
class Assertion:
    """One conditional (in)dependence statement about a dataset."""

    x: int
    y: int
    z: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in (INDEPENDENCE, DEPENDENCE):
            raise ValueError(f"unknown assertion kind {self.kind!r}")
        if self.x == self.y:
            raise ValueError("x and y must differ")
        if self.x in self.z or self.y in self.z:
            raise ValueError("x and y must not appear in the conditioning set")
        object.__setattr__(self, "z", tuple(sorted(self.z)))

    def canonical_key(self):
        """Cache key: variable pair ordered, conditioning set sorted."""
        a, b = (self.x, self.y) if self.x < self.y else (self.y, self.x)
        return (a, b, self.z)


@dataclass(frozen=True)
class TestOutcome:
    """Posterior log-probabilities of the two hypotheses for one test."""

    log_p_ind: float
    log_p_dep: float


def log_dirichlet_multinomial(counts, alpha):
    """Log marginal likelihood of counts under a symmetric Dirichlet prior.

    For A cells with total N:  lnG(A*alpha) - lnG(A*alpha + N)
    + sum_c [lnG(alpha + n_c) - lnG(alpha)].
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    counts = list(counts)
    if not counts:
        raise ValueError("at least one cell required")
    a = len(counts)
    n = sum(counts)
    total = math.lgamma(a * alpha) - math.lgamma(a * alpha + n)
    for c in counts:
        total += math.lgamma(alpha + c) - math.lgamma(alpha)
    return total


def _posterior(log_e_dep, log_e_ind):
    # Equal 1/2 priors; log1p keeps both tails finite for |gap| > 700.
    d = log_e_dep - log_e_ind
    if d >= 0:
        log_p_dep = -math.log1p(math.exp(-d))
        log_p_ind = log_p_dep - d
    else:
        log_p_ind = -math.log1p(math.exp(d))
        log_p_dep = log_p_ind + d
    return TestOutcome(log_p_ind=log_p_ind, log_p_dep=log_p_dep)


def _evidence_reference(d, x, y, z, alpha):
    # Dict-based path: used when the mixed-radix cell code would overflow,
    # and by tests as the plain-composition oracle.
    cc = contingency_counts(d, x, y, z)
    log_e_dep = 0.0
    log_e_ind = 0.0
    for table in cc.cells.values():
        log_e_dep += log_dirichlet_multinomial(table.ravel().tolist(), alpha)
        log_e_ind += log_dirichlet_multinomial(table.sum(axis=1).tolist(), alpha)
        log_e_ind += log_dirichlet_multinomial(table.sum(axis=0).tolist(), alpha)
    return log_e_dep, log_e_ind


def bayesian_ci_test(d, x, y, z=(), alpha=DEFAULT_ALPHA):
    """Posterior of independence vs dependence of ``x`` and ``y`` given ``z``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    z = sorted(z)
    _check_test_indices(d, x, y, z)
    capacity = d.arities[x] * d.arities[y]
    for w in z:
        capacity *= d.arities[w]
        if capacity > _CODE_CAPACITY:
            break
    if capacity > _CODE_CAPACITY:
        log_e_dep, log_e_ind = _evidence_reference(d, x, y, z, alpha)
    else:
        if z:
            zmat = np.ascontiguousarray(np.stack([d.column(w) for w in z]))
        else:
            zmat = np.empty((0, d.n_rows), dtype=np.int32)
        log_e_dep, log_e_ind = _kernels.ci_evidence(
            np.ascontiguousarray(d.column(x)),
            np.ascontiguousarray(d.column(y)),
            zmat,
            d.arities[x],
            d.arities[y],
            [d.arities[w] for w in z],
            alpha,
        )
    return _posterior(log_e_dep, log_e_ind)


class TestCache:
    """Memoizes TestOutcomes under canonical (x, y, z) keys.

    A key is computed at most once per cache lifetime; ``tests_computed``
    and ``cache_hits`` expose the counts experiments report.  Concurrent
    get-or-compute is safe: the computation is deterministic, so racing
    writers agree, and counters are lock-protected.
    """

    def __init__(self, alpha=DEFAULT_ALPHA):
        self.alpha = alpha
        self._outcomes = {}
        self.tests_computed = 0
        self.cache_hits = 0
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._outcomes)

    def outcome(self, d, x, y, z):
        """Get-or-compute the TestOutcome for the canonical key of (x, y, z)."""
        a, b = (x, y) if x < y else (y, x)
        key = (a, b, tuple(sorted(z)))
        out = self._outcomes.get(key)
        if out is not None:
            with self._lock:
                self.cache_hits += 1
            return out
        out = bayesian_ci_test(d, x, y, z, alpha=self.alpha)
        with self._lock:
            self._outcomes[key] = out
            self.tests_computed += 1
        return out

    def peek(self, x, y, z):
        """Cached outcome for the key, or None; never computes."""
        a, b = (x, y) if x < y else (y, x)
        return self._outcomes.get((a, b, tuple(sorted(z))))


def cached_test(cache, d, assertion):
    """Log posterior probability of ``assertion``, memoized through ``cache``."""
    out = cache.outcome(d, assertion.x, assertion.y, assertion.z)
    return out.log_p_ind if assertion.kind == INDEPENDENCE else out.log_p_dep
