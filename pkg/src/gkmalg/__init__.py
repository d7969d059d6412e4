"""Generalised Kac-Moody algebras built from harmonics on compact manifolds."""

import os as _os

# BLAS pools are sized when numpy loads, so the thread count is applied first.
_threads = _os.environ.get("GKMALG_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"
