"""Truncated Fock-space linear algebra and pure-loss channels.

This module is the numerical oracle of the package: every closed-form
quantity elsewhere is cross-checked against direct state constructions
built here.  States are immutable; all operations are pure functions.

Conventions fixed here and documented on every emitter:

* two-mode amplitudes are indexed ``amps[n_a, n_b]`` (row-major in mode a),
* the 50:50 beamsplitter maps coherent amplitudes
  ``(a1, a2) -> ((a1+a2)/sqrt2, (a1-a2)/sqrt2)``,
* pure-loss Kraus operators ``K_m`` are ordered by lost-photon count
  ``m = 0..n_max`` with coefficient ``sqrt(C(n,m)) eta^{(n-m)/2} (1-eta)^{m/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NumericalError, ParameterError, ShapeError, TruncationError

# Hard per-mode truncation cap; beyond this the deterministic rule below
# cannot guarantee its tail bound in double precision.
N_MAX_CAP = 200

# Eigenvalues below this are reported but flagged numerically null.
NULL_EIGENVALUE = 1e-12


def required_n_max(alpha: complex) -> int:
    """Deterministic truncation bound for a coherent amplitude.

    ``ceil(|a|^2 + 10 sqrt(|a|^2 + 1) + 20)``, guaranteeing a Poisson tail
    below 1e-14 for every amplitude used in the sweeps.  Raises
    TruncationError when the rule exceeds the per-mode cap.
    """
    a2 = abs(alpha) ** 2
    n = int(math.ceil(a2 + 10.0 * math.sqrt(a2 + 1.0) + 20.0))
    if n > N_MAX_CAP:
        raise TruncationError(
            f"truncation rule needs n_max={n} for |alpha|={abs(alpha):.3f}, "
            f"cap is {N_MAX_CAP}"
        )
    return n


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes over a truncated one- or two-mode Fock basis."""

    amps: np.ndarray
    modes: int = 1

    def __post_init__(self):
        amps = np.asarray(self.amps)
        if self.modes not in (1, 2):
            raise ShapeError("modes must be 1 or 2")
        if amps.ndim != self.modes:
            raise ShapeError(f"{self.modes}-mode vector needs {self.modes}D amplitudes")
        object.__setattr__(self, "amps", _freeze(amps))

    @property
    def n_max(self):
        """Truncation bound; an int for one mode, a (na, nb) tuple for two."""
        if self.modes == 1:
            return self.amps.shape[0] - 1
        return (self.amps.shape[0] - 1, self.amps.shape[1] - 1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise NumericalError("cannot normalize the zero vector")
        return FockVector(self.amps / n, self.modes)

    def overlap(self, other: "FockVector") -> complex:
        """Inner product <self|other>."""
        _check_same_shape(self, other)
        return complex(np.vdot(self.amps, other.amps))

    def projector(self) -> "FockMatrix":
        flat = self.amps.reshape(-1)
        return FockMatrix(np.outer(flat, flat.conj()), self.modes, self.amps.shape)


@dataclass(frozen=True)
class FockMatrix:
    """Operator (usually a density matrix) over the same index set."""

    entries: np.ndarray
    modes: int = 1
    shape_per_mode: tuple = field(default=None)

    def __post_init__(self):
        ent = np.asarray(self.entries)
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
            raise ShapeError("entries must be square")
        if self.modes not in (1, 2):
            raise ShapeError("modes must be 1 or 2")
        spm = self.shape_per_mode
        if spm is None:
            if self.modes == 2:
                raise ShapeError("two-mode matrix needs explicit per-mode shape")
            spm = (ent.shape[0],)
        spm = tuple(int(s) for s in spm)
        if int(np.prod(spm)) != ent.shape[0]:
            raise ShapeError("per-mode shape inconsistent with entry dimension")
        object.__setattr__(self, "entries", _freeze(ent))
        object.__setattr__(self, "shape_per_mode", spm)

    @property
    def n_max(self):
        if self.modes == 1:
            return self.shape_per_mode[0] - 1
        return (self.shape_per_mode[0] - 1, self.shape_per_mode[1] - 1)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


@dataclass(frozen=True)
class EigenSystem:
    """Spectral data of a Hermitian FockMatrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: tuple          # of FockVector
    null_mask: np.ndarray        # True where |eigenvalue| < NULL_EIGENVALUE

    def reconstruct(self) -> np.ndarray:
        vecs = np.stack([v.amps.reshape(-1) for v in self.eigenvectors], axis=1)
        return (vecs * self.eigenvalues) @ vecs.conj().T


def _check_same_shape(a, b):
    sa = a.amps.shape if isinstance(a, FockVector) else a.entries.shape
    sb = b.amps.shape if isinstance(b, FockVector) else b.entries.shape
    if a.modes != b.modes or sa != sb:
        raise ShapeError(f"incompatible shapes {sa} vs {sb}")


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------

def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Array ``e^{-|a|^2/2} a^n / sqrt(n!)`` for n = 0..n_max."""
    amps = np.empty(n_max + 1, dtype=np.complex128)
    amps[0] = 1.0
    for n in range(1, n_max + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps * math.exp(-0.5 * abs(alpha) ** 2)


def coherent_vector(alpha: complex, n_max: int) -> FockVector:
    """Coherent state |alpha> in the number basis.

    The truncation tail must stay below 1e-14 of the total weight,
    otherwise a TruncationError is raised.
    """
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    amps = coherent_amplitudes(alpha, n_max)
    deficit = abs(1.0 - float(np.sum(np.abs(amps) ** 2)))
    if deficit > 1e-14:
        raise TruncationError(
            f"coherent tail {deficit:.3e} above 1e-14 at n_max={n_max}, "
            f"|alpha|={abs(alpha):.4f}"
        )
    return FockVector(amps, 1)


def vacuum_vector(n_max: int) -> FockVector:
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[0] = 1.0
    return FockVector(amps, 1)


def number_vector(n: int, n_max: int) -> FockVector:
    if not 0 <= n <= n_max:
        raise ParameterError("photon number outside truncation")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps, 1)


def product(v1: FockVector, v2: FockVector) -> FockVector:
    """Two-mode tensor product of two one-mode vectors."""
    if v1.modes != 1 or v2.modes != 1:
        raise ShapeError("product expects one-mode factors")
    return FockVector(np.outer(v1.amps, v2.amps), 2)


def add(v1: FockVector, v2: FockVector) -> FockVector:
    _check_same_shape(v1, v2)
    return FockVector(v1.amps + v2.amps, v1.modes)


def scale(v: FockVector, c: complex) -> FockVector:
    return FockVector(v.amps * c, v.modes)


# ---------------------------------------------------------------------------
# unitaries
# ---------------------------------------------------------------------------

def apply_phase_shift(v: FockVector, phi: float, mode: int = 0) -> FockVector:
    """Multiply the amplitude at photon number n (in ``mode``) by e^{i n phi}."""
    if mode >= v.modes or mode < 0:
        raise ShapeError(f"mode {mode} invalid for a {v.modes}-mode vector")
    n = v.amps.shape[mode]
    phases = np.exp(1j * phi * np.arange(n))
    if v.modes == 1:
        return FockVector(v.amps * phases, 1)
    if mode == 0:
        return FockVector(v.amps * phases[:, None], 2)
    return FockVector(v.amps * phases[None, :], 2)


def _bs_block(n: int) -> np.ndarray:
    # exp(theta (a^dag b - a b^dag)) restricted to total photon number n,
    # theta = pi/4, followed by a pi phase on mode b (fixes the convention
    # (a1+a2)/sqrt2, (a1-a2)/sqrt2 for coherent inputs).
    m = np.arange(n)
    gen = np.zeros((n + 1, n + 1))
    off = np.sqrt((m + 1.0) * (n - m))
    gen[m + 1, m] = off
    gen[m, m + 1] = -off
    w, vecs = np.linalg.eigh(1j * gen)
    block = (vecs * np.exp(-1j * (math.pi / 4.0) * w)) @ vecs.conj().T
    parity = (-1.0) ** (n - np.arange(n + 1))   # pi phase on mode b occupation
    return parity[:, None] * block


def beamsplitter_50_50(v: FockVector) -> FockVector:
    """50:50 beamsplitter on a two-mode vector.

    Exact on every total-photon-number block that fits the per-mode
    truncation; callers are expected to size vectors by the truncation
    rule so that dropped corners carry < 1e-14 weight.
    """
    if v.modes != 2:
        raise ShapeError("beamsplitter needs a two-mode vector")
    na, nb = v.amps.shape
    if na != nb:
        raise ShapeError("beamsplitter expects equal per-mode truncation")
    n_mode = na - 1
    out = np.zeros_like(v.amps)
    for n in range(2 * n_mode + 1):
        lo, hi = max(0, n - n_mode), min(n, n_mode)
        coeffs = np.zeros(n + 1, dtype=np.complex128)
        idx = np.arange(lo, hi + 1)
        coeffs[idx] = v.amps[idx, n - idx]
        if not np.any(coeffs):
            continue
        mixed = _bs_block(n) @ coeffs
        out[idx, n - idx] = mixed[idx]
    return FockVector(out, 2)


def cross_kerr_unitary(v: FockVector, d: int) -> FockVector:
    """Cross-phase modulation ``e^{2 pi i n1 n2 / d}`` on a two-mode vector."""
    if v.modes != 2:
        raise ShapeError("cross-Kerr unitary needs a two-mode vector")
    if int(d) != d or d < 2:
        raise ParameterError("cross-Kerr order d must be an integer >= 2")
    n1 = np.arange(v.amps.shape[0])[:, None]
    n2 = np.arange(v.amps.shape[1])[None, :]
    phase = np.exp(2j * math.pi * (n1 * n2 % d) / d)
    return FockVector(v.amps * phase, 2)


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

def loss_coefficients(n_max: int, eta: float) -> np.ndarray:
    """Table c[n, m] = sqrt(C(n,m) eta^{n-m} (1-eta)^m), zero for m > n."""
    c = np.zeros((n_max + 1, n_max + 1))
    log_eta = math.log(eta) if eta > 0 else -math.inf
    log_loss = math.log1p(-eta) if eta < 1 else -math.inf
    for n in range(n_max + 1):
        for m in range(n + 1):
            if m == 0:
                log_w = n * log_eta
            elif eta == 1.0:
                continue
            else:
                log_w = (
                    math.lgamma(n + 1) - math.lgamma(m + 1) - math.lgamma(n - m + 1)
                    + (n - m) * log_eta + m * log_loss
                )
            c[n, m] = math.exp(0.5 * log_w)
    return c


def loss_channel(rho: FockMatrix, eta: float, mode: int = 0) -> FockMatrix:
    """Pure-loss Kraus map with transmission eta applied to one mode.

    Trace-preserving within 1e-10; eta = 1 is the identity.
    """
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"transmission eta must lie in (0, 1], got {eta}")
    if mode >= rho.modes or mode < 0:
        raise ShapeError(f"mode {mode} invalid for a {rho.modes}-mode matrix")
    if eta == 1.0:
        return rho
    if rho.modes == 1:
        coeff = loss_coefficients(rho.dim - 1, eta)
        out = kernels.loss_single_mode(np.array(rho.entries), coeff)
        return FockMatrix(out, 1, rho.shape_per_mode)
    da, db = rho.shape_per_mode
    t4 = np.array(rho.entries).reshape(da, db, da, db)
    if mode == 0:
        coeff = loss_coefficients(da - 1, eta)
        out = kernels.loss_first_mode(t4, coeff)
    else:
        coeff = loss_coefficients(db - 1, eta)
        out = kernels.loss_first_mode(
            np.ascontiguousarray(t4.transpose(1, 0, 3, 2)), coeff
        ).transpose(1, 0, 3, 2)
    dim = da * db
    return FockMatrix(out.reshape(dim, dim), 2, rho.shape_per_mode)


def loss_channel_both_modes(rho: FockMatrix, eta: float) -> FockMatrix:
    """Equal-rate loss on both modes of a two-mode matrix."""
    return loss_channel(loss_channel(rho, eta, 0), eta, 1)


# ---------------------------------------------------------------------------
# spectral and metric operations
# ---------------------------------------------------------------------------

def hermitian_eig(m: FockMatrix) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix, descending order."""
    defect = m.hermiticity_defect()
    if defect > 1e-12 * max(1.0, float(np.max(np.abs(m.entries)))):
        raise ShapeError(f"matrix is not Hermitian (defect {defect:.3e})")
    herm = 0.5 * (m.entries + m.entries.conj().T)
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    w = w[order]
    v = v[:, order]
    if m.modes == 1:
        vecs = tuple(FockVector(v[:, i], 1) for i in range(v.shape[1]))
    else:
        spm = m.shape_per_mode
        vecs = tuple(FockVector(v[:, i].reshape(spm), 2) for i in range(v.shape[1]))
    null = np.abs(w) < NULL_EIGENVALUE
    w = np.array(w)
    w.flags.writeable = False
    null.flags.writeable = False
    return EigenSystem(w, vecs, null)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, FockVector):
        flat = x.amps.reshape(-1)
        return np.outer(flat, flat.conj())
    return np.asarray(x.entries)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(a, b) -> float:
    """Fidelity between pure or mixed states (Uhlmann for two matrices)."""
    _check_same_shape(a, b)
    if isinstance(a, FockVector) and isinstance(b, FockVector):
        return float(abs(a.overlap(b)) ** 2)
    if isinstance(a, FockVector):
        flat = a.amps.reshape(-1)
        return float(np.real(flat.conj() @ b.entries @ flat))
    if isinstance(b, FockVector):
        return fidelity(b, a)
    # trace-norm form of the Uhlmann fidelity: ||sqrt(rho) sqrt(sigma)||_1^2,
    # numerically stable for nearly pure inputs
    prod = _psd_sqrt(a.entries) @ _psd_sqrt(b.entries)
    return float(np.sum(np.linalg.svd(prod, compute_uv=False)) ** 2)


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference."""
    _check_same_shape(a, b)
    diff = _as_matrix(a) - _as_matrix(b)
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(w)))


def expectation(op: np.ndarray, state) -> complex:
    """<v|O|v> for vectors, tr(O rho) for matrices."""
    op = np.asarray(op)
    if isinstance(state, FockVector):
        flat = state.amps.reshape(-1)
        if op.shape != (flat.size, flat.size):
            raise ShapeError("operator dimension mismatch")
        return complex(flat.conj() @ op @ flat)
    if op.shape != state.entries.shape:
        raise ShapeError("operator dimension mismatch")
    return complex(np.trace(op @ state.entries))


def mode_number_moments(v: FockVector, mode: int) -> tuple:
    """(<n>, <n^2>) of one mode of a normalized vector, by direct sum."""
    if mode >= v.modes or mode < 0:
        raise ShapeError(f"mode {mode} invalid")
    p = np.abs(v.amps) ** 2
    if v.modes == 2:
        p = p.sum(axis=1 - mode)
    n = np.arange(p.size)
    return float(np.sum(n * p)), float(np.sum(n * n * p))


def partial_trace(state, keep: int) -> FockMatrix:
    """Reduce a two-mode state to the density matrix of one mode."""
    if keep not in (0, 1):
        raise ShapeError("keep must be 0 or 1")
    if isinstance(state, FockVector):
        if state.modes != 2:
            raise ShapeError("partial trace needs a two-mode state")
        a = state.amps
        red = a @ a.conj().T if keep == 0 else a.T @ a.conj()
        return FockMatrix(red, 1, (red.shape[0],))
    if state.modes != 2:
        raise ShapeError("partial trace needs a two-mode state")
    da, db = state.shape_per_mode
    t4 = state.entries.reshape(da, db, da, db)
    red = np.trace(t4, axis1=1, axis2=3) if keep == 0 else np.trace(t4, axis1=0, axis2=2)
    return FockMatrix(red, 1, (red.shape[0],))
