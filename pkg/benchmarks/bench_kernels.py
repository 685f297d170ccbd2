"""Compare the numba and numpy kernel backends on the four hot paths.

Each workload is timed as best-of-N after a warmup call (the warmup also
absorbs JIT compilation for the numba backend).  Run from the repo root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 5 --backends numpy
"""

import argparse
import time

import numpy as np

from dynet import kernels
from dynet.core_model import EdgeParams
from dynet.simulator import simulate_si
from dynet.turnover import ExponentialLifespan, simulate_pa_turnover


def bench_thomas():
    rng = np.random.default_rng(0)
    n = 500_000
    # length-n bands, lower[0] and upper[-1] unused
    lower = -rng.random(n)
    upper = -rng.random(n)
    diag = 4.0 + rng.random(n)
    rhs = rng.random(n)

    def run():
        return kernels.thomas_solve(lower, diag, upper, rhs)

    return "thomas_solve n=5e5", run


def bench_connectivity():
    rng = np.random.default_rng(1)
    n = 2000
    iu, iv = np.triu_indices(n, 1)
    order = rng.permutation(iu.size)
    us, vs = iu[order].astype(np.int64), iv[order].astype(np.int64)

    def run():
        return kernels.connectivity_sweep(n, us, vs)

    return "connectivity_sweep n=2000", run


def bench_si():
    def run():
        rng = np.random.default_rng(2)
        for _ in range(20):
            simulate_si(n=400, params=EdgeParams(1.0, 1.0), beta=1.0,
                        rng=rng)
        return None

    return "simulate_si n=400 x20", run


def bench_pa():
    def run():
        return simulate_pa_turnover(10_000, 2, ExponentialLifespan(),
                                    200_000, rng=np.random.default_rng(3))

    return "pa_turnover n=1e4 steps=2e5", run


WORKLOADS = [bench_thomas, bench_connectivity, bench_si, bench_pa]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3,
                        help="timed repetitions per workload (default 3)")
    parser.add_argument("--backends", nargs="+", default=["numba", "numpy"],
                        choices=["numba", "numpy"])
    args = parser.parse_args()

    initial = kernels.active_backend()
    results = {}
    for backend in args.backends:
        try:
            kernels.set_backend(backend)
        except ImportError as exc:
            print(f"skipping {backend}: {exc}")
            continue
        for factory in WORKLOADS:
            label, run = factory()
            run()
            best = min(_timed(run) for _ in range(args.repeat))
            results.setdefault(label, {})[backend] = best
    kernels.set_backend(initial if initial else "numpy")

    width = max(len(label) for label in results)
    header = f"{'workload':<{width}}  " + "".join(
        f"{b:>12}" for b in args.backends)
    if len(args.backends) == 2:
        header += f"{'ratio':>8}"
    print(header)
    for label, times in results.items():
        row = f"{label:<{width}}  " + "".join(
            f"{times[b] * 1e3:>10.1f}ms" if b in times else f"{'-':>12}"
            for b in args.backends)
        if len(times) == 2:
            a, b = (times[x] for x in args.backends)
            row += f"{b / a:>7.1f}x"
        print(row)


def _timed(run):
    t = time.perf_counter()
    run()
    return time.perf_counter() - t


if __name__ == "__main__":
    main()
