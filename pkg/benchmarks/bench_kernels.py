"""Compare the numba and pure-numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends are imported side by side, so PACKSET_NUMBA does not matter
here. The first numba call of each kernel is made before timing so JIT
compilation is excluded.
"""
import argparse
import time

import numpy as np

from packset import kernels
from packset.constructions import sufficient_check
from packset.field import make_prime_field
from packset.ntheory import factor, find_primitive_root
from packset.packing import PackingSet, extend_to_maximal, verify_packing


def _timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(2024)
    big = make_prime_field(1_000_003)
    B = tuple(int(x) for x in rng.choice(np.arange(1, big.q), size=40, replace=False))
    verify_ps = PackingSet.build(big, B, [1, 2, 3], 3)
    greedy_ps = PackingSet.build(make_prime_field(100_003), [], [1, 2, 3], 2)
    cyc_field = make_prime_field(1_000_033)  # = 1 mod 11
    g = find_primitive_root(cyc_field, factor(cyc_field.q - 1), seed=1)
    b0 = cyc_field.pow(g, (cyc_field.q - 1) // 11)
    B0 = [cyc_field.pow(b0, i) for i in range(1, 11)]
    return [
        (f"verify_packing  M={verify_ps.n_errors:,}",
         lambda ks: verify_packing(verify_ps, backend=ks, strategy="table")),
        (f"verify_packing (sort)  M={verify_ps.n_errors:,}",
         lambda ks: verify_packing(verify_ps, backend=ks, strategy="sort")),
        ("extend_to_maximal  q=100003 A=3 t=2",
         lambda ks: extend_to_maximal(greedy_ps, order="shuffle", seed=7, backend=ks)),
        ("sufficient_check  ell=11 lam=2 t=3",
         lambda ks: sufficient_check(cyc_field, B0, 2, 3, backend=ks)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.NUMBA_KERNELS is None:
        raise SystemExit("numba is not installed; nothing to compare")
    backends = [kernels.NUMBA_KERNELS, kernels.NUMPY_KERNELS]
    rows = []
    for label, fn in cases():
        fn(kernels.NUMBA_KERNELS)  # JIT warm-up
        times = [_timeit(lambda: fn(ks), args.repeat) for ks in backends]
        rows.append((label, *times))
    width = max(len(r[0]) for r in rows)
    print(f"{'case'.ljust(width)}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for label, t_nb, t_np in rows:
        print(f"{label.ljust(width)}  {t_nb:10.4f}  {t_np:10.4f}  {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
