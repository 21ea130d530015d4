#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs representative workloads through both backends and prints the
per-call times and speedups.  The compiled module must be built
(``pip install -e . --no-build-isolation``) for the comparison to be
meaningful; otherwise both columns measure the fallback.
"""

import argparse
import time

import numpy as np

from ibmap import synth
from ibmap._kernels import BACKEND, _pykernels
from ibmap.synth import _directed_tables

try:
    from ibmap._kernels import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_ci_evidence(repeat):
    rng = np.random.default_rng(0)
    cases = [
        ("ci_evidence rows=50 |Z|=2", 50, 2),
        ("ci_evidence rows=1000 |Z|=2", 1000, 2),
        ("ci_evidence rows=3200 |Z|=6", 3200, 6),
    ]
    for label, rows, n_z in cases:
        x = rng.integers(0, 2, rows, dtype=np.int32)
        y = rng.integers(0, 2, rows, dtype=np.int32)
        z = rng.integers(0, 2, (n_z, rows), dtype=np.int32)
        args = (x, y, np.ascontiguousarray(z), 2, 2, [2] * n_z, 1.0)
        loops = max(1, 20000 // rows)

        def run(impl, args=args, loops=loops):
            for _ in range(loops):
                impl.ci_evidence(*args)

        t_py = _time(lambda: run(_pykernels), repeat) / loops
        if _ckernels is not None:
            t_c = _time(lambda: run(_ckernels), repeat) / loops
            yield label, t_py, t_c
        else:
            yield label, t_py, None


def bench_gibbs(repeat):
    for label, n, tau, rows in [
        ("gibbs_chain n=25 tau=2 rows=1000", 25, 2.0, 1000),
        ("gibbs_chain n=75 tau=2 rows=1000", 75, 2.0, 1000),
    ]:
        g = synth.random_structure(n, tau, 1)
        m = synth.pairwise_model(g, 1.0, 2)
        ptr, idx, tab = _directed_tables(m)
        rng = np.random.default_rng(3)
        init = rng.integers(0, 2, n).astype(np.int8)
        sweeps = 100 + rows * 10
        uniforms = rng.random((sweeps, n))
        args = (ptr, idx, tab, init, uniforms, 100, 9, rows)
        t_py = _time(lambda: _pykernels.gibbs_chain(*args), repeat)
        if _ckernels is not None:
            t_c = _time(lambda: _ckernels.gibbs_chain(*args), repeat)
            yield label, t_py, t_c
        else:
            yield label, t_py, None


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"active backend: {BACKEND}")
    print(f"{'workload':42s} {'python':>12s} {'cython':>12s} {'speedup':>9s}")
    for gen in (bench_ci_evidence, bench_gibbs):
        for label, t_py, t_c in gen(args.repeat):
            if t_c is None:
                print(f"{label:42s} {t_py*1e3:10.3f}ms {'n/a':>12s} {'n/a':>9s}")
            else:
                print(f"{label:42s} {t_py*1e3:10.3f}ms {t_c*1e3:10.3f}ms {t_py/t_c:8.1f}x")


if __name__ == "__main__":
    main()
