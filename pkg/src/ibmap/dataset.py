"""Immutable discrete datasets and contingency counting.

A dataset is a column-oriented table of category indices.  Arities are
taken from the data itself (max observed value + 1) unless supplied
explicitly, which keeps CSV ingestion self-contained.
"""

from dataclasses import dataclass

import numpy as np


class Dataset:
    """Column-oriented table of categorical values.

    Columns are int32 arrays; value ``v`` of variable ``i`` satisfies
    ``0 <= v < arities[i]``.  Instances are immutable after
    construction and safe for concurrent reads.
    """

    def __init__(self, names, columns, arities=None):
        self.names = list(names)
        cols = [np.asarray(c, dtype=np.int32) for c in columns]
        if len(cols) != len(self.names):
            raise ValueError("one column per name required")
        if not cols:
            raise ValueError("dataset needs at least one variable")
        n_rows = len(cols[0])
        for c in cols:
            if len(c) != n_rows:
                raise ValueError("columns must have equal length")
        if n_rows == 0:
            raise ValueError("dataset needs at least one row")
        self._data = np.ascontiguousarray(np.stack(cols))
        if self._data.min() < 0:
            raise ValueError("negative category value")
        observed = self._data.max(axis=1) + 1
        if arities is None:
            self.arities = [int(a) for a in observed]
        else:
            self.arities = [int(a) for a in arities]
            if len(self.arities) != len(self.names):
                raise ValueError("one arity per variable required")
            for i, a in enumerate(self.arities):
                if a < 1:
                    raise ValueError(f"arity of variable {i} must be >= 1")
                if observed[i] > a:
                    raise ValueError(f"variable {i} has values exceeding arity {a}")
        self._data.setflags(write=False)

    @property
    def n_vars(self):
        return len(self.names)

    @property
    def n_rows(self):
        return int(self._data.shape[1])

    def column(self, i):
        """Read-only int32 view of variable ``i``."""
        return self._data[i]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.names == other.names
            and self.arities == other.arities
            and np.array_equal(self._data, other._data)
        )

    def __repr__(self):
        return f"Dataset(n_vars={self.n_vars}, n_rows={self.n_rows})"


@dataclass
class ContingencyCounts:
    """Per-conditioning-assignment count tables for one variable pair.

    ``cells`` maps each observed conditioning assignment (a tuple of
    category values, ordered like the requested conditioning set) to an
    ``x_arity x y_arity`` count table.  Assignments with no observations
    do not appear.
    """

    x_arity: int
    y_arity: int
    cells: dict


def load_csv(path):
    """Load a dataset from a headed CSV of non-negative integers.

    The first line is a comma-separated header of variable names; each
    following line is one data row.  Arity of a variable is the maximum
    observed value plus one.  Malformed input raises ``ValueError``
    naming the offending line.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError(f"{path}: empty file (line 1)")
    names = [t.strip() for t in lines[0].split(",")]
    if any(not t for t in names):
        raise ValueError(f"{path}: empty variable name in header (line 1)")
    n = len(names)
    if len(lines) < 2:
        raise ValueError(f"{path}: no data rows (line 2)")
    rows = np.empty((len(lines) - 1, n), dtype=np.int32)
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split(",")
        if len(tokens) != n:
            raise ValueError(
                f"{path}: expected {n} fields, got {len(tokens)} (line {lineno})"
            )
        for j, tok in enumerate(tokens):
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"{path}: non-integer value {tok!r} (line {lineno})") from None
            if v < 0:
                raise ValueError(f"{path}: negative value {v} (line {lineno})")
            rows[lineno - 2, j] = v
    return Dataset(names, [rows[:, j] for j in range(n)])


def save_csv(d, path):
    """Write ``d`` in the same CSV dialect ``load_csv`` reads."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(d.names) + "\n")
        data = np.stack([d.column(j) for j in range(d.n_vars)], axis=1)
        for row in data:
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def contingency_counts(d, x, y, z):
    """Count co-occurrences of ``x`` and ``y`` per conditioning assignment.

    Returns a :class:`ContingencyCounts` whose cell tables partition the
    rows of ``d``: only observed conditioning assignments are keyed, so
    the number of cells never exceeds ``n_rows``.
    """
    z = sorted(z)
    _check_test_indices(d, x, y, z)
    xcol = d.column(x)
    ycol = d.column(y)
    zcols = [d.column(w) for w in z]
    cells = {}
    shape = (d.arities[x], d.arities[y])
    for r in range(d.n_rows):
        key = tuple(int(c[r]) for c in zcols)
        table = cells.get(key)
        if table is None:
            table = np.zeros(shape, dtype=np.int64)
            cells[key] = table
        table[xcol[r], ycol[r]] += 1
    return ContingencyCounts(shape[0], shape[1], cells)


def _check_test_indices(d, x, y, z):
    for v in (x, y, *z):
        if not 0 <= v < d.n_vars:
            raise IndexError(f"variable index {v} out of range")
    if x == y:
        raise ValueError("x and y must differ")
    if x in z or y in z:
        raise ValueError("x and y must not appear in the conditioning set")
