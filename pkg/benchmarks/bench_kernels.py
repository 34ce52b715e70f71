"""Benchmark the compiled kernels against the numpy fallback.

Runs the two hot loops (PageRank power iteration, cosine scan) on synthetic
inputs far beyond corpus scale and prints a timing table plus agreement
checks. Usage:

    python3 benchmarks/bench_kernels.py [--nodes 50000] [--edges 400000]
                                        [--chunks 50000] [--dim 256]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fairuse import _kernels_numpy

try:
    from fairuse import _ckernels
except ImportError:
    _ckernels = None


def build_csr(rng: np.random.Generator, n: int, m: int):
    src = rng.integers(0, n, size=m, dtype=np.int64)
    dst = rng.integers(0, n, size=m, dtype=np.int64)
    keep = src != dst
    pairs = np.unique(np.stack([src[keep], dst[keep]], axis=1), axis=0)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs = pairs[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(pairs[:, 0], minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(pairs[:, 1])


def timed(fn, repeats: int = 3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - started)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=50_000)
    parser.add_argument("--edges", type=int, default=400_000)
    parser.add_argument("--chunks", type=int, default=50_000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(1)
    rows = [("kernel", "backend", "best time", "speedup")]

    indptr, indices = build_csr(rng, args.nodes, args.edges)
    pr_args = (indptr, indices, args.nodes, 0.85, 1e-9, 200)
    numpy_time, (x_np, *_rest) = timed(lambda: _kernels_numpy.pagerank_power(*pr_args), args.repeats)
    rows.append(("pagerank", "numpy", f"{numpy_time * 1000:9.1f} ms", "1.0x"))
    if _ckernels is not None:
        compiled_time, (x_c, *_rest) = timed(lambda: _ckernels.pagerank_power(*pr_args), args.repeats)
        gap = float(np.max(np.abs(np.asarray(x_c) - x_np)))
        rows.append(
            ("pagerank", "compiled", f"{compiled_time * 1000:9.1f} ms",
             f"{numpy_time / compiled_time:.1f}x (L-inf gap {gap:.1e})")
        )

    matrix = rng.normal(size=(args.chunks, args.dim))
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    query = rng.normal(size=args.dim)
    query /= np.linalg.norm(query)
    numpy_time, s_np = timed(lambda: _kernels_numpy.cosine_scores(matrix, query), args.repeats)
    rows.append(("cosine scan", "numpy", f"{numpy_time * 1000:9.3f} ms", "1.0x"))
    if _ckernels is not None:
        compiled_time, s_c = timed(lambda: _ckernels.cosine_scores(matrix, query), args.repeats)
        gap = float(np.max(np.abs(np.asarray(s_c) - s_np)))
        rows.append(
            ("cosine scan", "compiled", f"{compiled_time * 1000:9.3f} ms",
             f"{numpy_time / compiled_time:.1f}x (L-inf gap {gap:.1e})")
        )

    print(f"nodes={args.nodes} edges={len(indices)} chunks={args.chunks} dim={args.dim}")
    if _ckernels is None:
        print("compiled extension not built; showing numpy fallback only")
    widths = [max(len(str(row[i])) for row in rows) for i in range(4)]
    for row in rows:
        print("  ".join(str(cell).ljust(width) for cell, width in zip(row, widths)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
