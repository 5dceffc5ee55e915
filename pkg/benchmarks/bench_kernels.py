"""Compare the numba and numpy backends of the enumeration kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends must return identical results; only the timings differ.
"""

import argparse
import itertools
import time

import numpy as np

from ordertypes import _kernels
from ordertypes.consistency import five_point_witness
from ordertypes.geometry import validate
from ordertypes.ramsey import copies, pair_index


def timed(func, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = func()
        best = min(best, time.perf_counter() - start)
    return best, result


def consistency_case():
    R = five_point_witness()
    tables = _kernels.orientation_tables(5, np.arange(1 << 10))
    return lambda b: _kernels.consistency_mask(tables, R.orientations, backend=b).sum()


def hexagon_case():
    # 2^15 pair colorings of a convex hexagon, candidates are its 20 triangles
    P = validate([(0, 0), (1, -3), (2, -4), (3, -4), (4, -3), (5, 0)])
    tri = validate([(0, 0), (1, -1), (2, 0)])
    cands = [[pair_index(6, a, b) for a, b in itertools.combinations(s, 2)] for s in copies(P, tri)]
    return lambda b: _kernels.first_uncovered(15, 2, cands, backend=b)


def pentagon_case():
    # no monochromatic triangle exists for 2-colorings of K5, so the search
    # stops early; useful for the per-call overhead
    P = validate([(0, 0), (1, -2), (3, -3), (5, -2), (6, 0)])
    tri = validate([(0, 0), (1, -1), (2, 0)])
    cands = [[pair_index(5, a, b) for a, b in itertools.combinations(s, 2)] for s in copies(P, tri)]
    return lambda b: _kernels.first_uncovered(10, 2, cands, backend=b)


CASES = {
    "consistency_mask (1024 tables, n=5)": consistency_case,
    "first_uncovered (K6, 2^15 colorings)": hexagon_case,
    "first_uncovered (K5, early exit)": pentagon_case,
}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    if "numba" in backends:
        # compile outside the timed region
        for make in CASES.values():
            make()("numba")
    print(f"{'kernel':40s} " + " ".join(f"{b:>10s}" for b in backends) + "  result")
    for name, make in CASES.items():
        run = make()
        times, results = [], []
        for b in backends:
            t, r = timed(lambda: run(b), args.repeat)
            times.append(t)
            results.append(int(r))
        if len(set(results)) != 1:
            raise SystemExit(f"backends disagree on {name}: {results}")
        print(f"{name:40s} " + " ".join(f"{t * 1e3:9.2f}ms" for t in times) + f"  {results[0]}")


if __name__ == "__main__":
    main()
