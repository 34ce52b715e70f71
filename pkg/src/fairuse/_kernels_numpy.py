"""Numpy implementations of the two hot kernels.

Semantics must match ``fairuse._ckernels``; the kernel parity tests and the
benchmark exercise both. Inputs follow the same conventions: the citation
graph arrives as a CSR out-adjacency (``indptr`` of length n+1, ``indices``
of edge targets), vectors and matrices are contiguous float64.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def pagerank_power(
    indptr: np.ndarray,
    indices: np.ndarray,
    n: int,
    damping: float,
    tolerance: float,
    max_iterations: int,
) -> tuple[np.ndarray, int, bool, float]:
    """Damped power iteration with uniform teleport and uniform dangling redistribution.

    Returns ``(scores, iterations_used, converged, max_sum_error)`` where
    ``max_sum_error`` is the largest ``|sum(x) - 1|`` observed over all
    iterates (the conservation check) and convergence means the L-infinity
    distance between the last two iterates is at most ``tolerance``.
    """
    out_deg = np.diff(indptr).astype(np.float64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    dst = np.asarray(indices, dtype=np.int64)
    dangling = out_deg == 0.0
    safe_deg = np.where(dangling, 1.0, out_deg)

    x = np.full(n, 1.0 / n, dtype=np.float64)
    base = (1.0 - damping) / n
    iterations = 0
    converged = False
    max_sum_error = 0.0
    for iterations in range(1, max_iterations + 1):
        share = np.where(dangling, 0.0, x) / safe_deg
        if dst.size:
            contrib = np.bincount(dst, weights=share[src], minlength=n)
        else:
            contrib = np.zeros(n, dtype=np.float64)
        dangle_mass = float(x[dangling].sum())
        x_new = base + damping * contrib + damping * dangle_mass / n
        max_sum_error = max(max_sum_error, abs(float(x_new.sum()) - 1.0))
        delta = float(np.max(np.abs(x_new - x)))
        x = x_new
        if delta <= tolerance:
            converged = True
            break
    return x, iterations, converged, max_sum_error


def cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Dot product of every (unit) row against a (unit) query vector."""
    return np.asarray(matrix) @ np.asarray(query)
