"""Numeric kernels with a compiled core and a pure-Python fallback.

The hot inner loops of the library live here: evidence accumulation for
the Bayesian conditional-independence test, and the single-site Gibbs
sweep used by the synthetic-data sampler.  At import time the compiled
Cython module is preferred; if it is unavailable (source checkout
without a build step) the numpy fallback is selected.  Setting the
environment variable ``IBMAP_PURE_PYTHON=1`` forces the fallback, which
is how the benchmark suite compares the two.

Both backends implement the same signatures and the same arithmetic;
``benchmarks/bench_kernels.py`` measures the difference.
"""

import os

from . import _pykernels

if os.environ.get("IBMAP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

ci_evidence = _impl.ci_evidence
gibbs_chain = _impl.gibbs_chain
