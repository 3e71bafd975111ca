#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Imports both backend modules directly (ignoring SQFAP_BACKEND) and times the
hot kernels on representative workloads.  The first numba call of each kernel
is excluded as JIT warmup.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]
"""

import argparse
import math
import time

import numpy as np

from sqfap import _kernels_numpy
from sqfap.arith import inverse_table, mobius_sieve, primes_upto
from sqfap.backend import HAVE_NUMBA
from sqfap.expsums import unit_roots

try:
    from sqfap import _kernels_numba
except ImportError:
    _kernels_numba = None


def timed(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def workloads(scale):
    n_sieve = int(4e6 * scale)
    n_sum = int(1e6 * scale)
    q = 99991
    base = primes_upto(math.isqrt(n_sieve))
    inv = inverse_table(q)
    root = np.asarray(unit_roots(q))
    mu = mobius_sieve(1, int(2e5 * scale)).values
    flags = _kernels_numpy.squarefree_segment(1, n_sieve, base)
    return [
        ("mobius_segment", "mobius_segment", (1, n_sieve, base)),
        ("squarefree_segment", "squarefree_segment", (1, n_sieve, base)),
        ("residue_counts", "residue_counts", (flags, 1, 997)),
        ("kloosterman_sum", "phase_sum_inverse_power", (1, n_sum, q, 7, 1, inv, root)),
        ("inverse_square_sum", "phase_sum_inverse_power", (1, n_sum, q, 7, 2, inv, root)),
        ("twisted_mobius_sum", "twisted_mobius_kernel", (mu, q, 7, inv, root)),
        ("mixed_sum", "mixed_sum_kernel", (q, 5, 9, inv, root)),
        ("psi_progression", "psi_progression_kernel", (n_sum, 0.37, q, 5, inv)),
        ("square_pair_count", "square_pair_count_kernel", (int(512 * scale), 997, 5, int(2e6 * scale))),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--scale", type=float, default=1.0)
    args = parser.parse_args()

    if _kernels_numba is None or not HAVE_NUMBA:
        print("numba unavailable: timing the numpy backend only")

    rows = []
    for label, name, call_args in workloads(args.scale):
        t_np = timed(getattr(_kernels_numpy, name), call_args, args.repeat)
        if _kernels_numba is not None:
            jit_fn = getattr(_kernels_numba, name)
            jit_fn(*call_args)  # warmup / compile
            t_nb = timed(jit_fn, call_args, args.repeat)
            rows.append((label, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((label, t_np, None, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for label, t_np, t_nb, speedup in rows:
        if t_nb is None:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
        else:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  {speedup:>7.2f}x")


if __name__ == "__main__":
    main()
