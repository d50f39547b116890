#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_kernels.py [--repeats N] [--json]
"""

import argparse
import json
import time

import numpy as np

from entropic_bell import kernels
from entropic_bell._accel import NUMBA_AVAILABLE

SEED = 42


def _hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def _time(func, args, repeats, warmup=3):
    for _ in range(warmup):
        func(*args)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        times.append(time.perf_counter() - start)
    return {"min": min(times), "median": float(np.median(times))}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    rng = np.random.default_rng(SEED)
    cases = []
    for n in (2, 4, 8, 16):
        a = _hermitian(rng, n)
        cases.append((f"jacobi_eigh n={n}", kernels.jacobi_eigh, (a,)))
    p3 = rng.dirichlet(np.ones(64)).reshape(4, 4, 4)
    cases.append(("joint3_entropies 4x4x4", kernels.joint3_entropies, (p3,)))
    p = rng.dirichlet(np.ones(256))
    cases.append(("entropy_bits n=256", kernels.entropy_bits, (p,)))

    rows = []
    for label, func, fargs in cases:
        row = {"kernel": label}
        row["numpy"] = _time(lambda *x: func(*x, use_numba=False), fargs, args.repeats)
        if NUMBA_AVAILABLE:
            row["numba"] = _time(lambda *x: func(*x, use_numba=True), fargs, args.repeats)
            row["speedup"] = row["numpy"]["median"] / row["numba"]["median"]
        rows.append(row)

    if args.json:
        print(json.dumps({"numba_available": NUMBA_AVAILABLE, "results": rows}, indent=2))
        return
    print(f"{'kernel':<26}{'numpy (us)':>12}{'numba (us)':>12}{'speedup':>10}")
    for row in rows:
        nb = row.get("numba", {}).get("median", float("nan")) * 1e6
        print(f"{row['kernel']:<26}{row['numpy']['median'] * 1e6:>12.1f}{nb:>12.1f}"
              f"{row.get('speedup', float('nan')):>10.1f}")


if __name__ == "__main__":
    main()
