#!/usr/bin/env python3
"""Benchmark the numba-jitted solver kernels against the pure-numpy fallback.

Runs repeated capacity solves on random mixed channels of growing size plus
one budgeted minimum-derived search, and prints per-workload timings with
the speedup. Usage:

    python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from cqcap import _kernels_numba, _kernels_numpy
from cqcap.channels import random_channel
from cqcap.superadd import estimate_min_derived_capacity

SOLVE_CASES = [
    ("capacity d=2, n=2", 2, 2, 300),
    ("capacity d=2, n=8", 2, 8, 150),
    ("capacity d=4, n=8", 4, 8, 60),
    ("capacity d=8, n=16", 8, 16, 20),
]


def bench_solves(mod, dim, letters, repeats):
    elapsed = 0.0
    for seed in range(repeats):
        states = random_channel(dim, [letters], "mixed", seed).base.stacked()
        start = time.perf_counter()
        ent = mod.state_entropies(states)
        mod.capacity_iterations(states, ent, 1e-6, 100_000)
        elapsed += time.perf_counter() - start
    return elapsed / repeats


def bench_min_derived(backend_mod):
    # swap the solver's kernel module so the search runs on one backend
    import cqcap.solver as solver_mod

    saved = solver_mod.kernels
    solver_mod.kernels = backend_mod
    try:
        chan = random_channel(2, [2, 2], "mixed", 0)
        start = time.perf_counter()
        estimate_min_derived_capacity(chan, 0, budget=4, seed=0)
        return time.perf_counter() - start
    finally:
        solver_mod.kernels = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=1, help="scale repeat counts")
    args = parser.parse_args()

    # trigger jit compilation outside the timed region
    warm = random_channel(2, [2], "mixed", 0).base.stacked()
    _kernels_numba.capacity_iterations(
        warm, _kernels_numba.state_entropies(warm), 1e-6, 10
    )

    print(f"{'workload':<24}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, dim, letters, base_repeats in SOLVE_CASES:
        repeats = max(1, base_repeats * args.repeats)
        t_np = bench_solves(_kernels_numpy, dim, letters, repeats)
        t_nb = bench_solves(_kernels_numba, dim, letters, repeats)
        print(
            f"{name:<24}{t_np * 1e3:>10.3f}ms{t_nb * 1e3:>10.3f}ms"
            f"{t_np / t_nb:>9.1f}x"
        )

    t_np = bench_min_derived(_kernels_numpy)
    t_nb = bench_min_derived(_kernels_numba)
    print(
        f"{'min-derived search':<24}{t_np:>10.3f}s {t_nb:>10.3f}s "
        f"{t_np / t_nb:>8.1f}x"
    )


if __name__ == "__main__":
    main()
