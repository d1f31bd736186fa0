"""Reference probes: NOON states, two-mode squeezed vacuum, and the SQL.

All baselines report energy with the same per-arm ``<n_b>`` convention as
the cat probes.  The SQL curve uses the fixed constant
``delta_phi = 1 / sqrt(N_av)``.  Lossy NOON and TMSV values come from the
numeric oracle on the Kraus-evolved states; no analytic lossy expression
is assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock, kernels, qfi
from .errors import ParameterError, TruncationError
from .pairspace import PairBasis


@dataclass(frozen=True)
class BaselineSpec:
    kind: str       # noon | tmsv | sql
    size: float     # k for NOON, squeeze r for TMSV, N_av for SQL

    def __post_init__(self):
        if self.kind not in ("noon", "tmsv", "sql"):
            raise ParameterError(f"unknown baseline kind {self.kind!r}")
        if self.size <= 0:
            raise ParameterError("baseline size must be positive")
        if self.kind == "noon" and int(self.size) != self.size:
            raise ParameterError("NOON size must be an integer")


# ---------------------------------------------------------------------------
# NOON
# ---------------------------------------------------------------------------

def noon_family(k: int, eta: float):
    """phi -> Kraus-evolved NOON state in the one-excited-arm sector."""
    basis = PairBasis(k)
    amps = np.zeros(k + 1, dtype=np.complex128)
    amps[k] = 1.0
    coords = (basis.ket_a(amps) + basis.ket_b(amps)) / math.sqrt(2.0)
    rho0 = basis.apply_loss(np.outer(coords, coords.conj()), eta)

    def family(phi: float) -> np.ndarray:
        u = basis.phase_b(phi)
        return u[:, None] * rho0 * u.conj()[None, :]

    return family


def noon_qfi(k: int, eta: float) -> qfi.QfiResult:
    """QFI of the k-photon NOON probe; exactly k^2 without loss."""
    if int(k) != k or k < 1:
        raise ParameterError("NOON k must be an integer >= 1")
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"transmission eta must lie in (0, 1], got {eta}")
    if eta == 1.0:
        return qfi.QfiResult(float(k * k), 1.0 / k, "pure_eq5", {})
    return qfi.qfi_mixed_numeric(noon_family(k, eta))


def noon_curve_qfi(n_av: float, eta: float) -> float:
    """Continuous-k NOON reference curve at per-arm energy N_av.

    The k-photon NOON probe has N_av = k/2 and lossy QFI eta^k k^2 (the
    oracle confirms this at integer k); the plotted baseline extends the
    formula continuously with k = 2 N_av.
    """
    k = 2.0 * n_av
    return eta ** k * k * k


# ---------------------------------------------------------------------------
# TMSV
# ---------------------------------------------------------------------------

def tmsv_n_max(r: float) -> int:
    """Thermal-tail truncation: at least 20 sinh^2 r + 20, capped.

    The variance sums weight the tail by n^2, so the bound actually used
    is half again larger than the minimum rule (still under the cap
    whenever the minimum is).
    """
    n_min = int(math.ceil(20.0 * math.sinh(r) ** 2 + 20.0))
    if n_min > fock.N_MAX_CAP:
        raise TruncationError(
            f"TMSV tail needs n_max={n_min} at r={r:.3f}, cap is {fock.N_MAX_CAP}"
        )
    return min(int(math.ceil(30.0 * math.sinh(r) ** 2 + 30.0)), fock.N_MAX_CAP)


def tmsv_schmidt(r: float, n_max: int) -> np.ndarray:
    """Coefficients tanh^n r / cosh r of the |n,n> expansion."""
    n = np.arange(n_max + 1)
    return np.tanh(r) ** n / math.cosh(r)


def tmsv_lossy_blocks(r: float, eta: float, n_max: int):
    """Photon-number-difference blocks of the two-arm lossy TMSV.

    Loss commutes with correlated rotations, so n_a - n_b is conserved
    block-wise; block delta >= 0 is returned once and reused for -delta
    (the two contribute identically to the QFI).
    """
    schmidt = tmsv_schmidt(r, n_max)
    coeff = fock.loss_coefficients(n_max, eta)
    return [kernels.lossy_tmsv_block(schmidt, coeff, delta)
            for delta in range(n_max + 1)]


def tmsv_family(r: float, eta: float, n_max: int | None = None):
    """phi -> list of blocks of the lossy TMSV under e^{i phi n_b}.

    Within block delta the phase conjugation depends only on the row
    index (the arm-b occupation), so the phi = 0 blocks are built once.
    Block -delta produces the same family as +delta; its weight is
    carried by an explicit duplicate so block multiplicity stays exact.
    """
    if n_max is None:
        n_max = tmsv_n_max(r)
    base = tmsv_lossy_blocks(r, eta, n_max)

    def family(phi: float):
        blocks = []
        for delta, blk in enumerate(base):
            nb = np.arange(blk.shape[0])
            u = np.exp(1j * phi * nb)
            rotated = u[:, None] * blk * u.conj()[None, :]
            blocks.append(rotated)
            if delta > 0:
                blocks.append(rotated.copy())
        return blocks

    return family


def tmsv_qfi(r: float, eta: float) -> qfi.QfiResult:
    """QFI of the two-mode squeezed vacuum probe with n_av = sinh^2 r."""
    if r <= 0:
        raise ParameterError("squeeze parameter r must be positive")
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"transmission eta must lie in (0, 1], got {eta}")
    n_max = tmsv_n_max(r)
    if eta == 1.0:
        schmidt = tmsv_schmidt(r, n_max)
        p = schmidt ** 2
        n = np.arange(n_max + 1)
        m1 = float(np.sum(n * p))
        m2 = float(np.sum(n * n * p))
        return qfi.QfiResult(4.0 * (m2 - m1 * m1), 1.0 / math.sqrt(4.0 * (m2 - m1 * m1)),
                             "pure_eq5", {"n_av": m1})
    res = qfi.qfi_mixed_numeric(tmsv_family(r, eta, n_max))
    diag = dict(res.diagnostics)
    diag["n_av"] = math.sinh(r) ** 2
    return qfi.QfiResult(res.f_q, res.delta_phi, res.method, diag)


def tmsv_r_for_nav(n_av: float) -> float:
    if n_av <= 0:
        raise ParameterError("n_av must be positive")
    return math.asinh(math.sqrt(n_av))


# ---------------------------------------------------------------------------
# SQL
# ---------------------------------------------------------------------------

def sql_bound(n_av: float) -> float:
    """Coherent-probe bound delta_phi = 1 / sqrt(N_av)."""
    if n_av <= 0:
        raise ParameterError("n_av must be positive")
    return 1.0 / math.sqrt(n_av)
