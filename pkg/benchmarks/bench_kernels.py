"""Time the compiled and pure-Python point-counting kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [p ...]
"""

import argparse
import random
import timeit

from cyctower import _kernels_py
from cyctower.finite_field import quad_char

try:
    from cyctower import _kernels
except ImportError:
    _kernels = None


def first_nonresidue(p):
    return next(a for a in range(2, p) if quad_char(a, p) == -1)


def bench(fn, *args, repeat=3):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("primes", nargs="*", type=int, default=[101, 211, 401, 809])
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the Python kernel is timed")
    rng = random.Random(0)
    print(f"{'p':>6} {'kernel':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for p in args.primes:
        F = tuple(rng.randrange(p) for _ in range(6)) + (1,)
        nr = first_nonresidue(p)
        for name, call in (("F_p", "affine_count_fp"), ("F_p^2", "affine_count_fp2")):
            extra = (nr,) if name == "F_p^2" else ()
            t_py = bench(getattr(_kernels_py, call), F, p, *extra)
            if _kernels is None:
                print(f"{p:>6} {name:>6} {t_py:>10.4f} {'-':>10} {'-':>8}")
                continue
            a = getattr(_kernels, call)(F, p, *extra)
            b = getattr(_kernels_py, call)(F, p, *extra)
            assert a == b, (p, name, a, b)
            t_cy = bench(getattr(_kernels, call), F, p, *extra)
            print(f"{p:>6} {name:>6} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>7.0f}x")


if __name__ == "__main__":
    main()
