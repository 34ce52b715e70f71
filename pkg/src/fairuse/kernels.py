"""Kernel dispatch between the compiled extension and the numpy fallback.

The default ("auto") picks the measured-best path per kernel: the compiled
power iteration wins on the sparse scatter loop, while the dense cosine scan
is fastest left to BLAS (see benchmarks/bench_kernels.py for numbers on this
host). Set ``FAIRUSE_KERNELS=python`` to force the numpy fallback for both
kernels, or ``FAIRUSE_KERNELS=compiled`` to require the extension for both
(import fails if it is not built).
"""
from __future__ import annotations

import os

from . import _kernels_numpy

_requested = os.environ.get("FAIRUSE_KERNELS", "auto").strip().lower() or "auto"
if _requested not in ("auto", "compiled", "python", "numpy"):
    raise ValueError(f"unrecognized FAIRUSE_KERNELS value: {_requested!r}")

_compiled = None
if _requested in ("auto", "compiled"):
    try:
        from . import _ckernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "FAIRUSE_KERNELS=compiled but fairuse._ckernels is not built; "
                "run `pip install -e . --no-build-isolation`"
            ) from None

if _requested == "compiled":
    pagerank_power = _compiled.pagerank_power
    cosine_scores = _compiled.cosine_scores
    BACKEND = "compiled"
elif _compiled is not None:  # auto with the extension available
    pagerank_power = _compiled.pagerank_power
    cosine_scores = _kernels_numpy.cosine_scores
    BACKEND = "compiled+blas"
else:
    pagerank_power = _kernels_numpy.pagerank_power
    cosine_scores = _kernels_numpy.cosine_scores
    BACKEND = "numpy"
