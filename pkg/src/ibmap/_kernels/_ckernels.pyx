# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
# distutils: language = c++
"""Compiled implementations of the hot kernels (see _pykernels for docs)."""

from libc.math cimport exp, lgamma
from libc.stdlib cimport free, malloc
from libcpp.algorithm cimport sort

import numpy as np


cdef double _cell_terms(long long *codes, Py_ssize_t n, double alpha) noexcept nogil:
    # codes sorted; per run of equal codes: lgamma(alpha + run) - lgamma(alpha)
    cdef double total = 0.0
    cdef double lg_alpha = lgamma(alpha)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t run
    while i < n:
        run = 1
        while i + run < n and codes[i + run] == codes[i]:
            run += 1
        total += lgamma(alpha + run) - lg_alpha
        i += run
    return total


cdef void _group_terms(long long *codes, Py_ssize_t n, double alpha,
                       double a_dep, double a_x, double a_y,
                       double *g_dep, double *g_x, double *g_y) noexcept nogil:
    # codes sorted (one run per observed conditioning assignment); per run of
    # length N accumulates lgamma(A*alpha) - lgamma(A*alpha + N) for each of
    # the three cell-space sizes.
    cdef double lg_dep = lgamma(a_dep * alpha)
    cdef double lg_x = lgamma(a_x * alpha)
    cdef double lg_y = lgamma(a_y * alpha)
    cdef double td = 0.0, tx = 0.0, ty = 0.0
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t run
    while i < n:
        run = 1
        while i + run < n and codes[i + run] == codes[i]:
            run += 1
        td += lg_dep - lgamma(a_dep * alpha + run)
        tx += lg_x - lgamma(a_x * alpha + run)
        ty += lg_y - lgamma(a_y * alpha + run)
        i += run
    g_dep[0] = td
    g_x[0] = tx
    g_y[0] = ty


def ci_evidence(const int[::1] x, const int[::1] y, const int[:, ::1] z,
                int x_arity, int y_arity, z_arities, double alpha):
    cdef Py_ssize_t n_rows = x.shape[0]
    cdef Py_ssize_t n_z = z.shape[0]
    cdef Py_ssize_t r, k
    cdef long long ax = x_arity
    cdef long long ay = y_arity
    cdef long long mult, zc

    cdef long long *strides = <long long *> malloc(max(n_z, 1) * sizeof(long long))
    cdef long long *cell = <long long *> malloc(n_rows * sizeof(long long))
    cdef long long *zx = <long long *> malloc(n_rows * sizeof(long long))
    cdef long long *zy = <long long *> malloc(n_rows * sizeof(long long))
    cdef long long *zg = <long long *> malloc(n_rows * sizeof(long long))
    if strides == NULL or cell == NULL or zx == NULL or zy == NULL or zg == NULL:
        free(strides); free(cell); free(zx); free(zy); free(zg)
        raise MemoryError()

    mult = 1
    for k in range(n_z):
        strides[k] = mult
        mult *= <long long> z_arities[k]

    cdef double alpha_c = alpha
    cdef double dep_cells, ind_x_cells, ind_y_cells
    cdef double g_dep = 0.0, g_x = 0.0, g_y = 0.0
    with nogil:
        for r in range(n_rows):
            zc = 0
            for k in range(n_z):
                zc += strides[k] * z[k, r]
            zg[r] = zc
            zx[r] = zc * ax + x[r]
            zy[r] = zc * ay + y[r]
            cell[r] = zx[r] * ay + y[r]

        sort(cell, cell + n_rows)
        sort(zx, zx + n_rows)
        sort(zy, zy + n_rows)
        sort(zg, zg + n_rows)

        dep_cells = _cell_terms(cell, n_rows, alpha_c)
        ind_x_cells = _cell_terms(zx, n_rows, alpha_c)
        ind_y_cells = _cell_terms(zy, n_rows, alpha_c)
        _group_terms(zg, n_rows, alpha_c, <double> (ax * ay), <double> ax,
                     <double> ay, &g_dep, &g_x, &g_y)

    free(strides); free(cell); free(zx); free(zy); free(zg)
    return g_dep + dep_cells, g_x + g_y + ind_x_cells + ind_y_cells


def gibbs_chain(const int[::1] nbr_ptr, const int[::1] nbr_idx,
                const double[:, :, ::1] log_tab,
                const signed char[::1] init_state, const double[:, ::1] uniforms,
                int burn_in, int thin, int n_rows):
    cdef Py_ssize_t n = init_state.shape[0]
    cdef Py_ssize_t n_sweeps = burn_in + n_rows * (thin + 1)
    if uniforms.shape[0] != n_sweeps or uniforms.shape[1] != n:
        raise ValueError("uniforms must have shape (burn_in + n_rows*(thin+1), n)")

    out_arr = np.empty((n_rows, n), dtype=np.int8)
    cdef signed char[:, ::1] out = out_arr
    state_arr = np.array(init_state, dtype=np.int8, copy=True)
    cdef signed char[::1] state = state_arr

    cdef Py_ssize_t s, i, k, row
    cdef int since_emit, v
    cdef double lr, p1

    row = 0
    since_emit = 0
    with nogil:
        for s in range(n_sweeps):
            for i in range(n):
                lr = 0.0
                for k in range(nbr_ptr[i], nbr_ptr[i + 1]):
                    v = state[nbr_idx[k]]
                    lr += log_tab[k, 1, v] - log_tab[k, 0, v]
                p1 = 1.0 / (1.0 + exp(-lr))
                state[i] = 1 if uniforms[s, i] < p1 else 0
            if s >= burn_in:
                since_emit += 1
                if since_emit == thin + 1:
                    for i in range(n):
                        out[row, i] = state[i]
                    row += 1
                    since_emit = 0
    return out_arr
