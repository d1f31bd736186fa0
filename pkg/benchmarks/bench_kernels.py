#!/usr/bin/env python3
"""Benchmark the JIT kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeats N]

The active backend follows CATQFI_BACKEND (numba when available); the
reference implementations are always the numpy ones, so running with
the default backend prints the numba-vs-numpy comparison the package
ships with.  Results are checked for agreement before timing.
"""

import argparse
import time

import numpy as np

from catqfi import kernels
from catqfi.fock import loss_coefficients

rng = np.random.default_rng(42)


def timeit(fn, *args, repeats=5):
    fn(*args)                      # warm-up (JIT compile on first call)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def hermitian(n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def bench(name, active, ref, *args, repeats=5, check=None):
    out_a = active(*args)
    out_r = ref(*args)
    if check is None:
        agree = np.max(np.abs(np.asarray(out_a) - np.asarray(out_r)))
    else:
        agree = check(out_a, out_r)
    t_active = timeit(active, *args, repeats=repeats)
    t_ref = timeit(ref, *args, repeats=repeats)
    print(f"{name:38s} {kernels.active_backend():>6s}: {t_active * 1e3:9.3f} ms"
          f"   numpy: {t_ref * 1e3:9.3f} ms   speedup: {t_ref / t_active:6.2f}x"
          f"   max|diff|: {agree:.1e}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    print(f"active backend: {kernels.active_backend()} "
          "(set CATQFI_BACKEND=numpy to force the fallback)\n")

    for n in (60, 120, 200):
        mat = hermitian(n + 1)
        coeff = loss_coefficients(n, 0.9)
        bench(f"loss_single_mode  n_max={n:3d}",
              kernels.loss_single_mode, kernels.loss_single_mode_ref,
              mat, coeff, repeats=args.repeats)

    for na, nb in ((24, 24), (40, 40)):
        t4 = (rng.normal(size=(na, nb, na, nb))
              + 1j * rng.normal(size=(na, nb, na, nb)))
        coeff = loss_coefficients(na - 1, 0.9)
        bench(f"loss_first_mode   {na}x{nb} tensor",
              kernels.loss_first_mode, kernels.loss_first_mode_ref,
              t4, coeff, repeats=args.repeats)

    for n_max in (100, 150):
        schmidt = 0.7 ** np.arange(n_max + 1)
        coeff = loss_coefficients(n_max, 0.9)
        bench(f"lossy_tmsv_block  n_max={n_max:3d} d=2",
              kernels.lossy_tmsv_block, kernels.lossy_tmsv_block_ref,
              schmidt, coeff, 2, repeats=args.repeats)

    n = 301
    tmat = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    lam = np.abs(rng.normal(size=n))
    lam[::7] = 0.0
    bench(f"qfi_pair_sum      dim={n}",
          kernels.qfi_pair_sum, kernels.qfi_pair_sum_ref,
          tmat, lam, 1e-12, repeats=args.repeats,
          check=lambda a, b: abs(a[0] - b[0]) / abs(b[0]))


if __name__ == "__main__":
    main()
