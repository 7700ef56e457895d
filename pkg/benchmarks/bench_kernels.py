"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 256 1024 4096] [--repeat 5]

Also times one full solve per backend (each in a fresh interpreter, since
the backend is picked at import time from DLGEODESIC_BACKEND).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from dlgeodesic.kernels import numba_backend, numpy_backend


def _inputs(N, seed=0):
    rng = np.random.default_rng(seed)
    t = np.linspace(0.25, 1.0, N + 1)
    F = np.sqrt(t) - t + 0.01 * rng.standard_normal(N + 1)
    F[0], F[-1] = 1.0, 0.0
    rho = rng.uniform(0.0, 5.0, N)
    return t, F, rho


def _cases(t, F, rho):
    return {
        "slack": lambda k: k.slack(t, F, rho, 1.0, True),
        "monotone_majorant": lambda k: k.monotone_majorant(t, F),
        "reduced_objective": lambda k: k.reduced_objective(t, F, 1.0, True),
        "pair_margins": lambda k: k.pair_margins(t, F, rho),
    }


def bench_kernels(sizes, repeat):
    print(f"{'kernel':<20}{'N':>7}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for N in sizes:
        for name, call in _cases(*_inputs(N)).items():
            if name == "pair_margins" and N > 2048:
                continue
            call(numba_backend)  # compile outside the timing
            number = max(1, 2000 // N)
            t_np = min(timeit.repeat(lambda: call(numpy_backend), number=number, repeat=repeat)) / number
            t_nb = min(timeit.repeat(lambda: call(numba_backend), number=number, repeat=repeat)) / number
            print(f"{name:<20}{N:>7}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}")


SOLVE = (
    "import time; from dlgeodesic import solve_full, SolverOptions;"
    "solve_full(0.25, SolverOptions(N=64));"
    "t0 = time.perf_counter(); s = solve_full(0.25, SolverOptions(N={N}));"
    "print(time.perf_counter() - t0, s.I_total)"
)


def bench_solve(N):
    for name in ("numpy", "numba"):
        env = dict(os.environ, DLGEODESIC_BACKEND=name)
        out = subprocess.run([sys.executable, "-c", SOLVE.format(N=N)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"solve_full(a=0.25, N={N}) [{name}]: {float(out[0]):.3f} s, I_total={float(out[1]):.9g}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--solve-N", type=int, default=1000)
    args = parser.parse_args()
    bench_kernels(args.sizes, args.repeat)
    bench_solve(args.solve_N)


if __name__ == "__main__":
    main()
