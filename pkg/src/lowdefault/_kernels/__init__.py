"""Kernel backend selection.

The hot inner loops (conditional likelihoods over factor draws, posterior
grid sums, Poisson tail averages, binomial mixture integrands) exist twice:
a compiled Cython extension (``_core``) and a NumPy fallback (``_numpy``).
The compiled backend is preferred when importable; set the environment
variable ``LOWDEFAULT_KERNELS=numpy`` or ``=compiled`` to force one.
Both backends agree to floating-point noise; ``benchmarks/bench_kernels.py``
compares their speed.
"""

import os

_requested = os.environ.get("LOWDEFAULT_KERNELS", "").strip().lower()

if _requested in ("", "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _numpy as _impl
elif _requested == "numpy":
    from . import _numpy as _impl
else:
    raise ImportError(
        f"LOWDEFAULT_KERNELS={_requested!r} not understood; use 'compiled' or 'numpy'"
    )

BACKEND = _impl.BACKEND_NAME

conditional_loglik = _impl.conditional_loglik
grid_loglik = _impl.grid_loglik
poisson_tail_mean = _impl.poisson_tail_mean
binom_pmf_given_factor = _impl.binom_pmf_given_factor
binom_tail_given_factor = _impl.binom_tail_given_factor

__all__ = [
    "BACKEND",
    "conditional_loglik",
    "grid_loglik",
    "poisson_tail_mean",
    "binom_pmf_given_factor",
    "binom_tail_given_factor",
]
