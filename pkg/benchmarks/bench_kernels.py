"""Time the compiled and pure-numpy kernel paths against each other.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are checked to give identical results before timing.
"""

import argparse
from timeit import repeat

import numpy as np

from locoh import _kernels
from locoh.scan import ambient


def cases():
    rng = np.random.default_rng(0)
    A = rng.integers(0, 125, size=(120, 60))
    amb = ambient(7)
    gens = np.array([5, 700, 1500], dtype=np.int64)
    yield "howell 120x60 over Z/125", lambda nb: _kernels.howell(A, 5, 3, use_numba=nb)
    yield "closure in GL2(F7)", lambda nb: _kernels.closure_indices(amb.mul, gens, amb.identity, use_numba=nb)
    yield "euclid grid p=13 N=4 e<=4", lambda nb: _kernels.euclid_grid_max(13, 4, 0, 4, use_numba=nb)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
    print(f"{'kernel':<28}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, run in cases():
        if _kernels.HAVE_NUMBA:
            assert same(run(True), run(False)), name  # also warms the jit
            t_nb = min(repeat(lambda: run(True), number=1, repeat=args.repeat)) * 1e3
        t_np = min(repeat(lambda: run(False), number=1, repeat=args.repeat)) * 1e3
        if _kernels.HAVE_NUMBA:
            print(f"{name:<28}{t_np:>10.2f}{t_nb:>10.2f}{t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<28}{t_np:>10.2f}{'-':>10}{'-':>9}")


if __name__ == "__main__":
    main()
