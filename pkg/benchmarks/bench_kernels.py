#!/usr/bin/env python3
"""Benchmark the compiled counting kernel against the numpy fallback.

Times full beta sweeps (every c != 1) for representative fields and the
n = 6 reference-table sweep, printing one row per workload with the
speedup.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from cdu import kernels
from cdu.cddt import beta_max
from cdu.field import Field
from cdu.gold import gold_table, make_gold_spec
from cdu.linpoly import from_terms
from cdu.tables import sweep_beta_grid


def time_beta_sweep(K, F, backend, repeats=3):
    kernels.set_backend(backend)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        beta_max(K, F)
        best = min(best, time.perf_counter() - t0)
    return best


def time_table_sweep(backend):
    kernels.set_backend(backend)
    t0 = time.perf_counter()
    sweep_beta_grid(6)
    return time.perf_counter() - t0


def main():
    if not kernels.HAVE_COMPILED:
        print("compiled kernel not built; run `python3 setup.py build_ext --inplace` first")
        return 1
    orig = kernels.active_backend()
    rows = []
    for (p, n) in [(2, 6), (2, 8), (3, 4), (3, 5), (5, 3)]:
        K = Field(p, n)
        F = gold_table(K, make_gold_spec(K, 1, from_terms(K, [(0, 1), (1, 1)]), 0))
        t_np = time_beta_sweep(K, F, "numpy")
        t_cy = time_beta_sweep(K, F, "compiled")
        rows.append((f"beta sweep GF({p}^{n})", t_np, t_cy))
    t_np = time_table_sweep("numpy")
    t_cy = time_table_sweep("compiled")
    rows.append(("n=6 reference grid (80 cells)", t_np, t_cy))
    kernels.set_backend(orig)

    w = max(len(r[0]) for r in rows)
    print(f"{'workload':<{w}}  {'numpy':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, t_np, t_cy in rows:
        print(f"{name:<{w}}  {t_np:>9.4f}s  {t_cy:>9.4f}s  {t_np / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
