"""Pure-Python (numpy) implementations of the hot kernels.

These mirror ``_ckernels.pyx`` operation for operation and are the
reference the compiled module is tested against.
"""

import math

import numpy as np
from scipy.special import gammaln


def ci_evidence(x, y, z, x_arity, y_arity, z_arities, alpha):
    """Marginal-likelihood evidence for one conditional-independence test.

    ``x`` and ``y`` are int32 columns of equal length; ``z`` is an
    ``(n_z, n_rows)`` int32 array of conditioning columns (possibly with
    zero rows).  Rows are grouped by their conditioning assignment; for
    each observed group the dependence hypothesis scores the joint
    ``x_arity * y_arity`` cell table and the independence hypothesis
    scores the two marginal count vectors, each under a symmetric
    Dirichlet prior with per-cell weight ``alpha``.

    Returns ``(log_e_dep, log_e_ind)``, the two log evidences summed
    over groups.  The caller must ensure ``x_arity * y_arity *
    prod(z_arities)`` fits in a signed 64-bit integer.
    """
    n_rows = x.shape[0]
    ax = int(x_arity)
    ay = int(y_arity)

    zcode = np.zeros(n_rows, dtype=np.int64)
    mult = 1
    for k in range(z.shape[0]):
        zcode += mult * z[k].astype(np.int64)
        mult *= int(z_arities[k])

    x64 = x.astype(np.int64)
    y64 = y.astype(np.int64)
    cell = (zcode * ax + x64) * ay + y64
    zx = zcode * ax + x64
    zy = zcode * ay + y64

    n_group = np.unique(zcode, return_counts=True)[1]
    c_cell = np.unique(cell, return_counts=True)[1]
    c_zx = np.unique(zx, return_counts=True)[1]
    c_zy = np.unique(zy, return_counts=True)[1]

    lg_alpha = gammaln(alpha)
    a_dep = ax * ay

    log_e_dep = float(
        np.sum(gammaln(a_dep * alpha) - gammaln(a_dep * alpha + n_group))
        + np.sum(gammaln(alpha + c_cell))
        - c_cell.size * lg_alpha
    )
    log_e_ind = float(
        np.sum(gammaln(ax * alpha) - gammaln(ax * alpha + n_group))
        + np.sum(gammaln(ay * alpha) - gammaln(ay * alpha + n_group))
        + np.sum(gammaln(alpha + c_zx))
        - c_zx.size * lg_alpha
        + np.sum(gammaln(alpha + c_zy))
        - c_zy.size * lg_alpha
    )
    return log_e_dep, log_e_ind


def gibbs_chain(nbr_ptr, nbr_idx, log_tab, init_state, uniforms, burn_in, thin, n_rows):
    """Run a single-site Gibbs chain over binary variables.

    The graph is given in CSR form (``nbr_ptr``, ``nbr_idx``) with one
    ``log_tab[k]`` 2x2 log-factor table per directed neighbor slot,
    oriented ``[site_value][neighbor_value]``.  One sweep updates all
    sites in index order; site ``i`` of sweep ``s`` consumes
    ``uniforms[s, i]``.  After ``burn_in`` sweeps, one row is emitted
    every ``thin + 1`` sweeps until ``n_rows`` rows are collected.
    """
    n = init_state.shape[0]
    n_sweeps = burn_in + n_rows * (thin + 1)
    if uniforms.shape != (n_sweeps, n):
        raise ValueError("uniforms must have shape (burn_in + n_rows*(thin+1), n)")

    state = [int(v) for v in init_state]
    ptr = nbr_ptr.tolist()
    idx = nbr_idx.tolist()
    tab = log_tab.tolist()
    out = np.empty((n_rows, n), dtype=np.int8)

    row = 0
    since_emit = 0
    for s in range(n_sweeps):
        urow = uniforms[s]
        for i in range(n):
            lr = 0.0
            for k in range(ptr[i], ptr[i + 1]):
                t = tab[k]
                v = state[idx[k]]
                lr += t[1][v] - t[0][v]
            p1 = 1.0 / (1.0 + math.exp(-lr))
            state[i] = 1 if urow[i] < p1 else 0
        if s >= burn_in:
            since_emit += 1
            if since_emit == thin + 1:
                out[row] = state
                row += 1
                since_emit = 0
    return out
