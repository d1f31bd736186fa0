"""Quantum Fisher information: pure-state closed forms, the mixed-state
spectral formula on closed-form data, and an exact numeric oracle.

The numeric oracle is authoritative for every lossy figure: it
eigendecomposes the state, differentiates the family by central
differences with one Richardson refinement, and assembles

    F = sum_{i,j} 2 |<i| d_phi rho |j>|^2 / (lambda_i + lambda_j)

over all eigenpairs above a denominator floor.  The closed-form route
(weights and vectors of the weak-loss probe) is a secondary, reported
path: its vectors stop being exact eigenvectors of the exact state, and
the deviation is measured, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cats, fock, kernels, probes
from .errors import NumericalError, ParameterError
from .loss import LossyProbe, PaperSpectrum

EIG_FLOOR = 1e-12        # lambda_i + lambda_j below this is skipped
FD_STEP = 1e-5           # central-difference step in radians
FD_MISMATCH_LIMIT = 1e-4 # h vs h/2 disagreement treated as failure


@dataclass(frozen=True)
class QfiResult:
    f_q: float
    delta_phi: float
    method: str
    diagnostics: dict = field(default_factory=dict)


def _result(f_q: float, method: str, diagnostics: dict | None = None) -> QfiResult:
    f_q = max(float(f_q), 0.0)
    delta = 1.0 / math.sqrt(f_q) if f_q > 0.0 else math.inf
    return QfiResult(f_q, delta, method, diagnostics or {})


# ---------------------------------------------------------------------------
# pure-state forms
# ---------------------------------------------------------------------------

def qfi_pure(spec: cats.CatSpec) -> QfiResult:
    """F = 4 (<n_b^2> - <n_b>^2) of the probe, from the closed moment sums."""
    m1, m2 = probes.probe_moments(spec)
    return _result(4.0 * (m2 - m1 * m1), "pure_eq5")


def qfi_pure_g2(spec: cats.CatSpec) -> QfiResult:
    """Same quantity expressed through the cat's <n> and g2."""
    mom = cats.cat_moments(spec)
    if mom.mean_n <= 0.0:
        raise ParameterError("g2 form undefined at zero mean photon number")
    n2 = probes.probe_norm(spec) ** 2
    f = 4.0 * n2 * mom.mean_n * ((mom.g2 - n2) * mom.mean_n + 1.0)
    return _result(f, "pure_eq10")


def variance_qfi(vector: fock.FockVector, mode: int = 1) -> float:
    """4 Var(n_mode) on an explicit Fock realization (oracle path)."""
    m1, m2 = fock.mode_number_moments(vector, mode)
    return 4.0 * (m2 - m1 * m1)


# ---------------------------------------------------------------------------
# numeric oracle for mixed states
# ---------------------------------------------------------------------------

def _as_blocks(state) -> list:
    if isinstance(state, fock.FockMatrix):
        return [np.asarray(state.entries)]
    if isinstance(state, np.ndarray):
        return [state]
    return [np.asarray(b) for b in state]


def _assemble(eigs, deriv_blocks, floor):
    total = 0.0
    skipped = 0.0
    hits = 0
    for (w, v), dblock in zip(eigs, deriv_blocks):
        tmat = v.conj().T @ dblock @ v
        part, skip, nhit = kernels.qfi_pair_sum(tmat, w, floor)
        total += part
        skipped += skip
        hits += nhit
    return total, skipped, hits


def qfi_mixed_numeric(rho_of_phi, phi0: float = 0.0, h: float = FD_STEP,
                      floor: float = EIG_FLOOR) -> QfiResult:
    """Exact-spectrum QFI of a parametrized state family.

    ``rho_of_phi`` maps a phase to a FockMatrix, a raw Hermitian array,
    or a list of Hermitian blocks (for families with a conserved block
    structure).  The derivative uses central differences at h and h/2
    with one Richardson refinement; the h vs h/2 spread is reported and
    must stay below FD_MISMATCH_LIMIT.
    """
    blocks0 = _as_blocks(rho_of_phi(phi0))
    eigs = []
    for b in blocks0:
        herm = 0.5 * (b + b.conj().T)
        try:
            w, v = np.linalg.eigh(herm)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigensolver failed: {exc}") from exc
        eigs.append((w, v))

    def diff(step):
        plus = _as_blocks(rho_of_phi(phi0 + step))
        minus = _as_blocks(rho_of_phi(phi0 - step))
        return [(p - m) / (2.0 * step) for p, m in zip(plus, minus)]

    d_h = diff(h)
    d_h2 = diff(0.5 * h)
    d_rich = [(4.0 * b2 - b1) / 3.0 for b1, b2 in zip(d_h, d_h2)]

    f_h, _, _ = _assemble(eigs, d_h, floor)
    f_h2, _, _ = _assemble(eigs, d_h2, floor)
    f_rich, skipped, hits = _assemble(eigs, d_rich, floor)
    scale = max(abs(f_rich), 1e-300)
    mismatch = abs(f_h - f_h2) / scale
    if mismatch > FD_MISMATCH_LIMIT:
        raise NumericalError(
            f"finite-difference derivative unstable: h vs h/2 spread {mismatch:.3e}"
        )
    diag = {
        "h": h,
        "fd_mismatch": mismatch,
        "floor_hits": hits,
        "skipped_mass": skipped,
    }
    return _result(f_rich, "mixed_numeric_oracle", diag)


# ---------------------------------------------------------------------------
# spectral formula on the closed-form weak-loss data
# ---------------------------------------------------------------------------

def qfi_mixed_paper(lp_or_spectrum, floor: float = EIG_FLOOR) -> QfiResult:
    """Mixed-state QFI from the closed-form rank-4 spectral data.

    Uses the eigenvector-derivative form

        F = 4 sum_i l_i (<v_i'|v_i'> - |<v_i'|v_i>|^2)
            - sum_{i != j} 8 l_i l_j / (l_i + l_j) |<v_i'|v_j>|^2

    with analytic derivatives; pair denominators below the floor are
    skipped and the skipped mass recorded.
    """
    spec_data = lp_or_spectrum.spectral if isinstance(lp_or_spectrum, LossyProbe) \
        else lp_or_spectrum
    if not isinstance(spec_data, PaperSpectrum):
        raise ParameterError("expected a LossyProbe or PaperSpectrum")
    lam = spec_data.lambdas
    vecs = spec_data.vectors
    dvecs = spec_data.dvectors
    total = 0.0
    skipped = 0.0
    hits = 0
    for i in range(4):
        total += 4.0 * lam[i] * (
            np.vdot(dvecs[i], dvecs[i]).real - abs(np.vdot(dvecs[i], vecs[i])) ** 2
        )
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            denom = lam[i] + lam[j]
            cross = abs(np.vdot(dvecs[i], vecs[j])) ** 2
            if denom < floor:
                skipped += cross
                hits += 1
                continue
            total -= 8.0 * lam[i] * lam[j] / denom * cross
    diag = {
        "ortho_residue": spec_data.ortho_residue,
        "floor_hits": hits,
        "skipped_mass": skipped,
    }
    return _result(total, "mixed_eq15_paper", diag)
