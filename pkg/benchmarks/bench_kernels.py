"""Compare the numba and numpy kernel backends.

Each backend runs in its own interpreter because the choice is made at
import time from POLYDIST_DISABLE_NUMBA. Times exclude the first call,
which for numba includes compilation (cached on disk afterwards).

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def run_cases(repeat):
    from polydist import MatrixPolynomial, TargetSet, WeightSet, kernels, sweep
    from polydist.fgamma import GammaAssembly
    from polydist.fixtures import example2

    rng = np.random.default_rng(0)
    n, m, k = 8, 4, 6
    P = MatrixPolynomial(tuple(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(m + 1)))
    T = TargetSet(np.exp(2j * np.pi * np.arange(k) / k))
    w = WeightSet.coefficient_norms(P)
    frank = example2()
    gammas = np.geomspace(1e-2, 5, 50)
    return kernels.BACKEND, {
        "assemble n=8 m=4 k=6": _best(lambda: GammaAssembly(P, T, w).at(1.0), repeat),
        "hat coefficients k=6": _best(lambda: kernels.hat_coefficients(T.targets, 1.0), repeat),
        "sweep Frank(12), 50 gammas": _best(lambda: sweep(frank.P, frank.targets, frank.weights, gammas), max(1, repeat // 10)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=50)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        backend, times = run_cases(args.repeat)
        print(json.dumps({"backend": backend, "times": times}))
        return
    results = {}
    for disable in ("0", "1"):
        env = dict(os.environ, POLYDIST_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            env=env, check=True, capture_output=True, text=True,
        ).stdout
        doc = json.loads(out)
        results[doc["backend"]] = doc["times"]
    names = list(next(iter(results.values())))
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in results))
    for name in names:
        print(f"{name:32s}" + "".join(f"{results[b][name] * 1e3:10.3f}ms" for b in results))


if __name__ == "__main__":
    main()
