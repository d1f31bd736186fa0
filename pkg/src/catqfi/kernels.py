"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Backend selection: set ``CATQFI_BACKEND=numpy`` to force the fallback or
``CATQFI_BACKEND=numba`` to require the JIT path; unset, numba is used
when importable.  Both paths produce identical results up to floating
roundoff; the test suite runs against whichever backend is active and
``benchmarks/bench_kernels.py`` times one against the other.

Kernels here are the inner loops that dominate sweep runtime:

* ``loss_single_mode`` — pure-loss Kraus map on a one-mode density matrix,
* ``loss_first_mode`` — the same map on mode *a* of a two-mode tensor,
* ``lossy_tmsv_block`` — one photon-number-difference block of a
  two-mode squeezed vacuum state after loss on both arms,
* ``qfi_pair_sum`` — the masked double sum of the mixed-state Fisher
  information assembly.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

_ENV = os.environ.get("CATQFI_BACKEND", "auto").strip().lower()
if _ENV not in ("auto", "numba", "numpy"):
    raise ValueError(f"CATQFI_BACKEND must be auto|numba|numpy, got {_ENV!r}")

_use_numba = False
if _ENV in ("auto", "numba"):
    try:
        from numba import njit

        _use_numba = True
    except ImportError:
        if _ENV == "numba":
            raise
        warnings.warn("numba unavailable, falling back to pure numpy kernels")


def active_backend() -> str:
    """Name of the kernel backend actually in use ('numba' or 'numpy')."""
    return "numba" if _use_numba else "numpy"


# ---------------------------------------------------------------------------
# pure numpy reference implementations
# ---------------------------------------------------------------------------

def _loss_single_mode_np(mat, coeff):
    n = mat.shape[0]
    out = np.zeros_like(mat)
    for m in range(n):
        c = coeff[m:, m]
        if c.size == 0 or np.max(c * c) < 1e-18:
            continue
        w = np.outer(c, c)
        out[: n - m, : n - m] += w * mat[m:, m:]
    return out


def _loss_first_mode_np(t4, coeff):
    na = t4.shape[0]
    out = np.zeros_like(t4)
    for m in range(na):
        c = coeff[m:, m]
        if c.size == 0 or np.max(c * c) < 1e-18:
            continue
        w = np.outer(c, c)
        out[: na - m, :, : na - m, :] += w[:, None, :, None] * t4[m:, :, m:, :]
    return out


def _lossy_tmsv_block_np(schmidt, coeff, delta):
    n_max = schmidt.size - 1
    size = n_max + 1 - delta
    # G[m, p] couples original Schmidt index n = p + m to row index p after
    # losing m-delta photons in mode a and m photons in mode b.
    g = np.zeros((n_max + 1, size))
    for m in range(delta, n_max + 1):
        n_hi = n_max - m
        idx = np.arange(0, n_hi + 1)
        nn = idx + m
        g[m, : n_hi + 1] = schmidt[nn] * coeff[nn, m - delta] * coeff[nn, m]
    return g.T @ g


def _qfi_pair_sum_np(tmat, lam, floor):
    denom = lam[:, None] + lam[None, :]
    keep = denom >= floor
    sq = np.abs(tmat) ** 2
    total = float(np.sum(2.0 * sq[keep] / denom[keep]))
    skipped = float(np.sum(sq[~keep]))
    hits = int(np.count_nonzero(~keep))
    return total, skipped, hits


# ---------------------------------------------------------------------------
# numba JIT implementations
# ---------------------------------------------------------------------------

if _use_numba:

    @njit(cache=True)
    def _loss_single_mode_nb(mat, coeff):  # pragma: no cover - JIT body
        n = mat.shape[0]
        out = np.zeros_like(mat)
        for m in range(n):
            peak = 0.0
            for i in range(m, n):
                w = coeff[i, m] * coeff[i, m]
                if w > peak:
                    peak = w
            if peak < 1e-18:
                continue
            for i in range(m, n):
                ci = coeff[i, m]
                for j in range(m, n):
                    out[i - m, j - m] += ci * coeff[j, m] * mat[i, j]
        return out

    @njit(cache=True)
    def _loss_first_mode_nb(t4, coeff):  # pragma: no cover - JIT body
        na = t4.shape[0]
        nb = t4.shape[1]
        out = np.zeros_like(t4)
        for m in range(na):
            peak = 0.0
            for i in range(m, na):
                w = coeff[i, m] * coeff[i, m]
                if w > peak:
                    peak = w
            if peak < 1e-18:
                continue
            for i in range(m, na):
                ci = coeff[i, m]
                for j in range(m, na):
                    w = ci * coeff[j, m]
                    for b in range(nb):
                        for bp in range(nb):
                            out[i - m, b, j - m, bp] += w * t4[i, b, j, bp]
        return out

    @njit(cache=True)
    def _lossy_tmsv_block_nb(schmidt, coeff, delta):  # pragma: no cover
        n_max = schmidt.size - 1
        size = n_max + 1 - delta
        out = np.zeros((size, size))
        row = np.empty(size)
        for m in range(delta, n_max + 1):
            n_hi = n_max - m
            for p in range(n_hi + 1):
                row[p] = schmidt[p + m] * coeff[p + m, m - delta] * coeff[p + m, m]
            for p in range(n_hi + 1):
                gp = row[p]
                if gp == 0.0:
                    continue
                for q in range(n_hi + 1):
                    out[p, q] += gp * row[q]
        return out

    @njit(cache=True)
    def _qfi_pair_sum_nb(tmat, lam, floor):  # pragma: no cover - JIT body
        n = lam.size
        total = 0.0
        skipped = 0.0
        hits = 0
        for i in range(n):
            for j in range(n):
                denom = lam[i] + lam[j]
                sq = abs(tmat[i, j]) ** 2
                if denom >= floor:
                    total += 2.0 * sq / denom
                else:
                    skipped += sq
                    hits += 1
        return total, skipped, hits


# ---------------------------------------------------------------------------
# public bindings
# ---------------------------------------------------------------------------

if _use_numba:
    loss_single_mode = _loss_single_mode_nb
    loss_first_mode = _loss_first_mode_nb
    lossy_tmsv_block = _lossy_tmsv_block_nb
    qfi_pair_sum = _qfi_pair_sum_nb
else:
    loss_single_mode = _loss_single_mode_np
    loss_first_mode = _loss_first_mode_np
    lossy_tmsv_block = _lossy_tmsv_block_np
    qfi_pair_sum = _qfi_pair_sum_np

# Reference (always-numpy) bindings, used by the backend-equivalence tests
# and the benchmark script.
loss_single_mode_ref = _loss_single_mode_np
loss_first_mode_ref = _loss_first_mode_np
lossy_tmsv_block_ref = _lossy_tmsv_block_np
qfi_pair_sum_ref = _qfi_pair_sum_np
