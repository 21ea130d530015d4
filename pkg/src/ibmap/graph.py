"""Undirected structures over a fixed set of nodes.

Adjacency is stored as one Python-int bitset per node, which keeps
blanket reads, edge flips and separation queries cheap for the domain
sizes this library targets (``MAX_NODES`` caps construction).
"""

import json

MAX_NODES = 512

ENUMERATION_LIMIT = 6


class Structure:
    """Simple undirected graph: symmetric bitset adjacency, no self-loops."""

    __slots__ = ("n", "_rows")

    def __init__(self, n, _rows=None):
        if n < 1:
            raise ValueError("structure needs at least one node")
        if n > MAX_NODES:
            raise ValueError(f"n={n} exceeds MAX_NODES={MAX_NODES}")
        self.n = n
        self._rows = list(_rows) if _rows is not None else [0] * n

    @classmethod
    def from_edges(cls, n, edges):
        g = cls(n)
        for x, y in edges:
            g.add_edge(x, y)
        return g

    def _check_node(self, x):
        if not 0 <= x < self.n:
            raise IndexError(f"node {x} out of range for n={self.n}")

    def _check_pair(self, x, y):
        self._check_node(x)
        self._check_node(y)
        if x == y:
            raise ValueError("self-loops are not allowed")

    def has_edge(self, x, y):
        self._check_pair(x, y)
        return bool((self._rows[x] >> y) & 1)

    def add_edge(self, x, y):
        self._check_pair(x, y)
        self._rows[x] |= 1 << y
        self._rows[y] |= 1 << x

    def remove_edge(self, x, y):
        self._check_pair(x, y)
        self._rows[x] &= ~(1 << y)
        self._rows[y] &= ~(1 << x)

    def flip_edge(self, x, y):
        """Return a copy with edge (x, y) toggled; self is unmodified."""
        self._check_pair(x, y)
        g = Structure(self.n, self._rows)
        g._rows[x] ^= 1 << y
        g._rows[y] ^= 1 << x
        return g

    def blanket(self, x):
        """The neighbor set of ``x`` (its Markov blanket)."""
        self._check_node(x)
        row = self._rows[x]
        return {i for i in range(self.n) if (row >> i) & 1}

    def blanket_mask(self, x):
        self._check_node(x)
        return self._rows[x]

    def degree(self, x):
        self._check_node(x)
        return self._rows[x].bit_count()

    def edges(self):
        """Sorted list of (i, j) pairs with i < j."""
        out = []
        for i in range(self.n):
            row = self._rows[i] >> (i + 1)
            j = i + 1
            while row:
                if row & 1:
                    out.append((i, j))
                row >>= 1
                j += 1
        return out

    @property
    def n_edges(self):
        return sum(r.bit_count() for r in self._rows) // 2

    def copy(self):
        return Structure(self.n, self._rows)

    def key(self):
        """Hashable snapshot of the adjacency, for visited-set use."""
        return tuple(self._rows)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __repr__(self):
        return f"Structure(n={self.n}, edges={self.edges()})"


def u_separated(g, x, y, z):
    """True iff every path between ``x`` and ``y`` intersects ``z``.

    Implemented as breadth-first reachability from ``x`` that never
    enters a node of ``z``; separation holds when ``y`` is unreachable.
    """
    g._check_pair(x, y)
    zmask = 0
    for w in z:
        g._check_node(w)
        zmask |= 1 << w
    if (zmask >> x) & 1 or (zmask >> y) & 1:
        raise ValueError("x and y must not appear in the separating set")
    rows = g._rows
    visited = 1 << x
    frontier = 1 << x
    target = 1 << y
    while frontier:
        reach = 0
        f = frontier
        i = 0
        while f:
            if f & 1:
                reach |= rows[i]
            f >>= 1
            i += 1
        reach &= ~visited & ~zmask
        if reach & target:
            return False
        visited |= reach
        frontier = reach
    return True


def hamming(g1, g2):
    """Number of unordered node pairs on which the edge sets differ."""
    if g1.n != g2.n:
        raise ValueError("structures must have the same number of nodes")
    return sum((a ^ b).bit_count() for a, b in zip(g1._rows, g2._rows)) // 2


def all_pairs(n):
    """All unordered node pairs in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def structure_from_index(n, index, pairs=None):
    """Structure whose edge set is the bit pattern ``index`` over all_pairs(n)."""
    if pairs is None:
        pairs = all_pairs(n)
    g = Structure(n)
    for t, (i, j) in enumerate(pairs):
        if (index >> t) & 1:
            g.add_edge(i, j)
    return g


def structure_to_index(g, pairs=None):
    if pairs is None:
        pairs = all_pairs(g.n)
    index = 0
    for t, (i, j) in enumerate(pairs):
        if g.has_edge(i, j):
            index |= 1 << t
    return index


def enumerate_structures(n):
    """Yield every structure on ``n`` nodes exactly once.

    Ordering treats the lexicographic pair list as bits of a counter, so
    the sequence is reproducible.  Guarded to ``n <= ENUMERATION_LIMIT``
    because the count is 2^(n(n-1)/2).
    """
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration limited to n <= {ENUMERATION_LIMIT}")
    pairs = all_pairs(n)
    for index in range(1 << len(pairs)):
        yield structure_from_index(n, index, pairs)


def save_structure(g, path):
    """Write ``g`` as a JSON object {"n": ..., "edges": [[i, j], ...]}."""
    obj = {"n": g.n, "edges": [[i, j] for i, j in g.edges()]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=None, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def load_structure(path):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return Structure.from_edges(int(obj["n"]), obj["edges"])
