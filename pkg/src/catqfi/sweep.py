"""Energy-constrained sweeps: invert the per-arm energy map, trace
precision-versus-energy curves with baselines, locate curve crossovers,
and pick the best probe under a photon budget.

Rows are independent work items evaluated in a deterministic order
(d, then k, then energy grid point, then baselines); output is therefore
byte-identical across runs regardless of how callers parallelize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import baselines, cats, loss, probes, qfi
from .errors import DomainError, NumericalError, ParameterError, TruncationError

BASELINE_ORDER = ("noon", "tmsv", "sql")


@dataclass(frozen=True)
class SweepRow:
    d: int
    k: int
    alpha: float
    eta: float
    n_av: float
    f_q: float
    delta_phi: float
    method: str
    f_q_paper: float | None = None      # closed-form spectral value, lossy rows
    error: str | None = None


@dataclass(frozen=True)
class CurveRequest:
    d_list: tuple
    k_list: tuple
    eta: float
    n_av_range: tuple               # (min, max, points)
    baselines: tuple = ()

    def __post_init__(self):
        if not self.d_list or not self.k_list:
            raise ParameterError("d_list and k_list must be non-empty")
        lo, hi, points = self.n_av_range
        if points < 2:
            raise ParameterError("n_av grid needs at least 2 points")
        if not 0 < lo < hi:
            raise ParameterError("need 0 < n_av_min < n_av_max")
        if not 0.0 < self.eta <= 1.0:
            raise ParameterError("eta must lie in (0, 1]")
        for b in self.baselines:
            if b not in BASELINE_ORDER:
                raise ParameterError(f"unknown baseline {b!r}")

    def grid(self) -> np.ndarray:
        lo, hi, points = self.n_av_range
        return np.linspace(lo, hi, int(points))


def alpha_for_nav(d: int, k: int, n_av_target: float, tol: float = 1e-9) -> float:
    """Invert the monotone map alpha -> N_av of the lossless probe.

    The per-arm energy tends to k/2 as alpha -> 0, so targets at or
    below k/2 are out of domain.  Monotonicity is verified on the
    bracket before bisecting.
    """
    if n_av_target <= k / 2.0:
        raise DomainError(
            f"N_av target {n_av_target} not above the k/2 = {k / 2} infimum"
        )

    def forward(a: float) -> float:
        return probes.n_av_of(cats.CatSpec(d, k, a))

    lo, hi = 1e-9, 1.0
    try:
        while forward(hi) < n_av_target:
            hi *= 2.0
            if hi > 64.0:
                raise TruncationError
    except TruncationError:
        raise DomainError(
            f"N_av target {n_av_target} needs amplitudes beyond the truncation cap"
        ) from None
    samples = [forward(a) for a in np.linspace(lo, hi, 9)]
    if any(b < a - 1e-12 for a, b in zip(samples, samples[1:])):
        raise NumericalError("energy map not monotone on the bracket")

    val = forward(hi)
    mid = hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = forward(mid)
        if abs(val - n_av_target) < tol:
            return mid
        if val < n_av_target:
            lo = mid
        else:
            hi = mid
    raise NumericalError(
        f"bisection stalled at |N_av - target| = {abs(val - n_av_target):.3e}"
    )


def evaluate_cat_point(d: int, k: int, n_av: float, eta: float) -> SweepRow:
    """One sweep row: energy inversion, then the appropriate QFI route."""
    try:
        alpha = alpha_for_nav(d, k, n_av)
    except (DomainError, NumericalError, TruncationError) as exc:
        return SweepRow(d, k, math.nan, eta, n_av, math.nan, math.nan,
                        "error", None, str(exc))
    spec = cats.CatSpec(d, k, alpha)
    if eta == 1.0:
        res = qfi.qfi_pure(spec)
        return SweepRow(d, k, alpha, eta, n_av, res.f_q, res.delta_phi, res.method)
    res = qfi.qfi_mixed_numeric(loss.lossy_probe_family(spec, eta))
    paper = qfi.qfi_mixed_paper(loss.lossy_probe(spec, eta)).f_q
    return SweepRow(d, k, alpha, eta, n_av, res.f_q, res.delta_phi,
                    res.method, paper)


def _baseline_row(kind: str, n_av: float, eta: float) -> SweepRow:
    if kind == "noon":
        f = baselines.noon_curve_qfi(n_av, eta)
        size = 2.0 * n_av
    elif kind == "tmsv":
        size = baselines.tmsv_r_for_nav(n_av)
        f = baselines.tmsv_qfi(size, eta).f_q
    else:
        f = n_av        # SQL: delta_phi = 1/sqrt(N_av)
        size = n_av
    delta = 1.0 / math.sqrt(f) if f > 0 else math.inf
    return SweepRow(0, 0, size, eta, n_av, f, delta, kind)


def trace_curve(req: CurveRequest) -> list:
    """Sweep rows for every (d, k, N_av) plus requested baseline curves.

    Domain and truncation problems are annotated on the affected row
    rather than aborting the sweep.  The ``alpha`` column carries the
    inverted cat amplitude; on baseline rows it carries the baseline's
    own size parameter (continuous k for NOON, squeeze r for TMSV).
    """
    grid = req.grid()
    rows = []
    for d in sorted(set(req.d_list)):
        for k in sorted(set(req.k_list)):
            if k >= d:
                continue
            for n_av in grid:
                rows.append(evaluate_cat_point(d, k, float(n_av), req.eta))
    for kind in BASELINE_ORDER:
        if kind not in req.baselines:
            continue
        for n_av in grid:
            rows.append(_baseline_row(kind, float(n_av), req.eta))
    return rows


def _series(rows, k: int):
    sel = [r for r in rows if r.k == k and r.method != "error" and r.d > 0]
    return {round(r.n_av, 12): r for r in sel}


def find_crossover(rows: list, k_a: int, k_b: int, tol: float = 1e-4):
    """Energy at which the delta_phi ordering of two k-series flips.

    Scans the common grid for the first sign change, then bisects the
    underlying evaluators to ``tol``; returns None when the ordering
    never flips on the grid.
    """
    ser_a = _series(rows, k_a)
    ser_b = _series(rows, k_b)
    common = sorted(set(ser_a) & set(ser_b))
    if len(common) < 2:
        raise ParameterError("k-series share fewer than two grid points")
    ds = {r.d for r in list(ser_a.values()) + list(ser_b.values())}
    etas = {r.eta for r in list(ser_a.values()) + list(ser_b.values())}
    if len(ds) != 1 or len(etas) != 1:
        raise ParameterError("crossover needs a single (d, eta) per series")
    d, eta = ds.pop(), etas.pop()

    def gap(n_av: float) -> float:
        row_a = evaluate_cat_point(d, k_a, n_av, eta)
        row_b = evaluate_cat_point(d, k_b, n_av, eta)
        return row_a.delta_phi - row_b.delta_phi

    bracket = None
    for x0, x1 in zip(common, common[1:]):
        g0 = ser_a[x0].delta_phi - ser_b[x0].delta_phi
        g1 = ser_a[x1].delta_phi - ser_b[x1].delta_phi
        if g0 * g1 < 0.0:
            bracket = (x0, x1, g0)
            break
    if bracket is None:
        return None
    lo, hi, g_lo = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = gap(mid)
        if (gm < 0) == (g_lo < 0):
            lo, g_lo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_probe(n_av: float, eta: float, d_max: int = 16,
                  k_max: int = 3) -> tuple:
    """Exhaustive (d, k) grid argmax of the QFI at fixed per-arm energy.

    Ties break toward smaller d, then smaller k; (d, k) pairs whose
    energy domain excludes the target are skipped.
    """
    if d_max > 16:
        raise ParameterError("d_max capped at 16")
    best = None
    for d in range(1, d_max + 1):
        for k in range(0, min(k_max, d - 1) + 1):
            if n_av <= k / 2.0:
                continue
            row = evaluate_cat_point(d, k, n_av, eta)
            if row.method == "error":
                continue
            if best is None or row.f_q > best[3] * (1.0 + 1e-12):
                best = (d, k, row.alpha, row.f_q)
    if best is None:
        raise DomainError("no feasible (d, k) for the requested energy")
    return best
