"""Time the compiled and pure-Python kernel backends on realistic inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

The comb input mimics a six-spin environment: every ordered pair of the 64
eigenvalues contributes one gap, and degenerate gaps cluster.
"""
import argparse
import time

import numpy as np

from qlandauer import kernels
from qlandauer.model import ModelParams, build_h_env


def comb_input(n_spins=6):
    energies = np.linalg.eigvalsh(build_h_env(ModelParams(N=n_spins)).matrix)
    q = (energies[:, None] - energies[None, :]).ravel()
    w = np.random.default_rng(0).random(q.size)
    order = np.argsort(q, kind="stable")
    return q[order], w[order]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    q, w = comb_input()
    cases = {
        f"merge_sorted_comb ({q.size} gaps)": lambda b: b.merge_sorted_comb(q, w, 1e-9),
        "golden_max_r (d = 2..1024)": lambda b: [b.golden_max_r(float(2**k), 1e-4, 0.5, 1e-10) for k in range(1, 11)],
    }
    names = kernels.available_backends()
    print(f"{'kernel':<36}" + "".join(f"{n:>14}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, case in cases.items():
        t = {n: best_of(lambda: case(kernels.get_backend(n)), args.repeat) for n in names}
        row = f"{label:<36}" + "".join(f"{t[n] * 1e3:>12.3f}ms" for n in names)
        if "compiled" in t:
            row += f"{t['python'] / t['compiled']:>11.1f}x"
        print(row)
    if "compiled" not in names:
        print("compiled backend not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
