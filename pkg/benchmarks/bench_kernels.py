#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy reference.

Two views:

* micro: raw kernel calls on representative word shapes,
* end to end: gradient-matrix assembly and greedy pruning of the largest
  shipped generator set, run in subprocesses so each backend is selected the
  same way it is in production (at import).

Run from the repository root:  python benchmarks/bench_kernels.py
"""
import os
import subprocess
import sys
import timeit

import numpy as np

from rotinv import kernels
from rotinv.kernels import reference


def micro_case(k, n, seed=0):
    rng = np.random.default_rng(seed)
    h = np.ascontiguousarray(rng.normal(size=(k, n, n)))
    g = np.ones(n)
    u = rng.normal(size=n)
    v = rng.normal(size=n)
    return h, g, u, v


def time_call(fn, *args, repeat=20000):
    best = min(timeit.repeat(lambda: fn(*args), number=repeat, repeat=3))
    return best / repeat * 1e6  # us per call


def run_micro():
    impls = [("reference", reference)]
    if kernels.BACKEND == "compiled":
        from rotinv.kernels import _fast

        impls.append(("compiled", _fast))
    print("== micro kernels (us/call) ==")
    header = f"{'kernel':<22}{'shape':<12}" + "".join(f"{name:>12}" for name, _ in impls)
    print(header)
    for k, n in ((2, 4), (4, 4), (5, 6)):
        h, g, u, v = micro_case(k, n)
        rows = [
            ("word_value", lambda impl: impl.word_value(h)),
            ("word_grads", lambda impl: impl.word_grads(h, g)),
            ("sandwich_value", lambda impl: impl.sandwich_value(u, h, g, v)),
            ("sandwich_grads", lambda impl: impl.sandwich_grads(u, h, g, v)),
        ]
        for label, call in rows:
            cells = "".join(
                f"{time_call(lambda: call(impl)):>12.2f}" for _, impl in impls
            )
            print(f"{label:<22}{f'k={k} n={n}':<12}{cells}")
    print()


END_TO_END = """
import time
import numpy as np
from rotinv import (MetricSignature, SystemSpec, gradient_matrix, greedy_prune,
                    random_system, theorem3_basis)
import rotinv.kernels

spec = SystemSpec(4, MetricSignature.euclidean(4),
                  n_vectors=2, n_symmetric=2, n_antisymmetric=2)
exprs = theorem3_basis(4)
rng = np.random.default_rng(0)
systems = [random_system(spec, rng) for _ in range(12)]

t0 = time.perf_counter()
for s in systems:
    gradient_matrix(exprs, s)
t1 = time.perf_counter()
pruned = greedy_prune(exprs, systems)
t2 = time.perf_counter()
print(f"{rotinv.kernels.BACKEND} {t1 - t0:.3f} {t2 - t1:.3f} {len(pruned)}")
"""


def run_end_to_end():
    print("== end to end: theorem3_basis(4), 303 expressions, 12 sample points ==")
    print(f"{'backend':<12}{'gradients (s)':>16}{'greedy prune (s)':>18}{'pruned':>8}")
    timings = {}
    for env_extra in ({}, {"ROTINV_PURE_PYTHON": "1"}):
        env = dict(os.environ, **env_extra)
        out = subprocess.run(
            [sys.executable, "-c", END_TO_END], capture_output=True, text=True, env=env
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            raise SystemExit(1)
        backend, grad_s, prune_s, pruned = out.stdout.split()
        timings[backend] = float(grad_s)
        print(f"{backend:<12}{float(grad_s):>16.3f}{float(prune_s):>18.3f}{pruned:>8}")
    if len(timings) == 2 and "compiled" in timings:
        speedup = timings["reference"] / timings["compiled"]
        print(f"\ngradient assembly speedup: {speedup:.1f}x")


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}\n")
    run_micro()
    run_end_to_end()
