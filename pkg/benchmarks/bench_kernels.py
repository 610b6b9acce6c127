"""Compare the compiled kernel with the pure-Python twin.

    python3 benchmarks/bench_kernels.py [--q-lo 2900] [--q-hi 3000]

Both backends scan the same denominators; results must be identical.
"""
import argparse
import time

from shulga import _pykernels

try:
    from shulga import _kernels
except ImportError:  # extension not built
    _kernels = None


def run(mod, qs, cap):
    t = time.perf_counter()
    out = [r for q in qs for r in mod.scan_q(q, cap)]
    return time.perf_counter() - t, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-lo", type=int, default=2900)
    ap.add_argument("--q-hi", type=int, default=3000)
    ap.add_argument("--cap", type=int, default=200)
    args = ap.parse_args()
    qs = range(args.q_lo, args.q_hi + 1)
    t_py, r_py = run(_pykernels, qs, args.cap)
    n = len(r_py)
    print(f"fractions: {n}")
    print(f"python : {t_py:8.3f} s  {1e6 * t_py / n:8.2f} us/fraction")
    if _kernels is None:
        print("cython : not built")
        return
    t_cy, r_cy = run(_kernels, qs, args.cap)
    print(f"cython : {t_cy:8.3f} s  {1e6 * t_cy / n:8.2f} us/fraction")
    print(f"speedup: {t_py / t_cy:.1f}x   identical: {r_py == r_cy}")


if __name__ == "__main__":
    main()
