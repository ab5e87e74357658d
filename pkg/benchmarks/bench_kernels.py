"""Compare the numba and numpy kernel backends.

Run: python3 benchmarks/bench_kernels.py [--repeat 3]
Both backends are imported by name, so the env flag does not matter here.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from unitgroups import _kernels as K
from unitgroups.density import reduced_factors
from unitgroups.polyring import build_module_ring, direct_product_presentation, finite_field, zmod_presentation


def _ring_case(P):
    nf = build_module_ring(P).normalized
    one = int(K.encode(nf.one, nf.moduli))
    return nf.mult, nf.moduli, one


def _best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        ("unit_orders F_2^12", K.unit_orders_numpy, K.unit_orders_numba, _ring_case(finite_field(2, 12))),
        ("unit_orders Z/64 x F_27", K.unit_orders_numpy, K.unit_orders_numba,
         _ring_case(direct_product_presentation([zmod_presentation(64), finite_field(3, 3)]))),
        ("closure reduced 1e6", K.multiplicative_closure_numpy, K.multiplicative_closure_numba,
         (reduced_factors(10**6), 10**6)),
    ]
    print(f"{'case':28s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, f_np, f_nb, fargs in cases:
        f_nb(*fargs)  # compile outside the timing
        t_np, r_np = _best(f_np, fargs, args.repeat)
        t_nb, r_nb = _best(f_nb, fargs, args.repeat)
        assert np.array_equal(r_np, r_nb), name
        print(f"{name:28s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
