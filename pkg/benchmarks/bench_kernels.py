"""Numba vs numpy timings for the hot kernels and for one full run.

    python benchmarks/bench_kernels.py [--repeat 5] [--no-run]

Kernel timings call both implementations in-process. The full-run timing
starts a fresh interpreter per backend so ``ROBUSTDESIGN_DISABLE_NUMBA``
takes effect at import.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from robustdesign import kernels
from robustdesign._accel import HAVE_NUMBA
from robustdesign.uq import total_degree_indices

RUN_SNIPPET = """
import time
from robustdesign import RobustProblem, RunConfig, run
from robustdesign._accel import backend_name
p = RobustProblem.two_peak()
run(p, RunConfig(eval_budget=20))
t = time.perf_counter()
for s in range({seeds}):
    run(p, RunConfig(seed=s))
print(backend_name(), (time.perf_counter() - t) / {seeds})
"""


def cases():
    rng = np.random.default_rng(0)
    heights = np.array([11.0, 10.0])
    centers = np.array([[2.0, 2.0], [-2.0, -2.0]])
    sigmas = np.array([0.5, 2.0])
    pts50 = rng.uniform(-5, 5, (50, 2))
    pts = rng.uniform(-5, 5, (100_000, 2))
    p = rng.uniform(1e-12, 1 - 1e-12, 100_000)
    z = rng.standard_normal((50, 2))
    alphas = total_degree_indices(2, 2)
    objs = rng.random((400, 2))
    return [
        ("bump_sum 50x2", "bump_sum", (pts50, heights, centers, sigmas)),
        ("bump_sum 1e5x2", "bump_sum", (pts, heights, centers, sigmas)),
        ("ndtri 1e5", "ndtri", (p,)),
        ("hermite_design 50x6", "hermite_design", (z, alphas, 2)),
        ("nondominated 400", "nondominated_mask", (objs,)),
    ]


def best_of(fn, args, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(*args), number=1), 1e-7)))
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seeds", type=int, default=5, help="seeds for the full-run timing")
    ap.add_argument("--no-run", action="store_true", help="skip the full-run timing")
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        print("numba not installed; only the numpy kernels are timed")
    print(f"{'kernel':<22}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for label, name, kargs in cases():
        t_np = best_of(getattr(kernels, name + "_np"), kargs, args.repeat)
        if HAVE_NUMBA:
            jit = getattr(kernels, name + "_jit")
            jit(*kargs)  # compile
            t_jit = best_of(jit, kargs, args.repeat)
            print(f"{label:<22}{t_np * 1e6:>10.1f}us{t_jit * 1e6:>10.1f}us{t_np / t_jit:>9.1f}x")
        else:
            print(f"{label:<22}{t_np * 1e6:>10.1f}us{'-':>12}{'-':>10}")

    if args.no_run:
        return 0
    print(f"\nfull robust run (600 evals x 50 samples), mean of {args.seeds} seeds")
    for flag in ("0", "1"):
        env = dict(os.environ, ROBUSTDESIGN_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", RUN_SNIPPET.format(seeds=args.seeds)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<8}{float(out[1]) * 1e3:8.1f} ms/run")
    return 0


if __name__ == "__main__":
    sys.exit(main())
