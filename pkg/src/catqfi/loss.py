"""Photon-loss evolution of cat states and of the two-arm probe.

Three routes to the lossy state are kept side by side and checked
against each other:

* the closed coherent-component double sum (exact),
* the fock-core Kraus channel (the independent oracle),
* a two-term weak-loss mixture valid for small ``|alpha|^2 (1 - eta)``,
  together with its closed-form rank-4 spectral data.

Loss acts after the phase shift on both arms with equal transmission;
because pure loss is phase-covariant per mode, the lossy family over the
estimation phase is obtained exactly by conjugating the phi = 0 state
with the phase diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import cats, fock, probes
from .errors import ApproximationDomainError, ParameterError
from .pairspace import PairBasis


@dataclass(frozen=True)
class ShiftedCat:
    """Cat state with every coherent component rotated by e^{i phi}."""

    spec: cats.CatSpec
    phi: float

    def to_fock(self, n_max: int | None = None) -> fock.FockVector:
        base = cats.cat_to_fock(self.spec, n_max)
        return fock.apply_phase_shift(base, self.phi)


def _check_eta(eta: float):
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"transmission eta must lie in (0, 1], got {eta}")


def _coherent_component_matrix(basis_size: int, spec: cats.CatSpec, eta: float,
                               phi: float) -> np.ndarray:
    """Columns |sqrt(eta) alpha w^q e^{i phi}> for q = 0..d-1."""
    cols = np.empty((basis_size, spec.d), dtype=np.complex128)
    for q in range(spec.d):
        amp = math.sqrt(eta) * spec.alpha * spec.omega ** q * np.exp(1j * phi)
        cols[:, q] = fock.coherent_amplitudes(amp, basis_size - 1)
    return cols


def _phase_pattern(d: int, k: int) -> np.ndarray:
    """Matrix omega^{k (q' - q)} with rows q, columns q'."""
    q = np.arange(d)
    return np.exp(2j * math.pi * k * (q[None, :] - q[:, None]) / d)


def lossy_cat_exact(spec: cats.CatSpec, eta: float,
                    n_max: int | None = None) -> fock.FockMatrix:
    """Exact single-mode lossy cat from the coherent double sum, unit trace."""
    _check_eta(eta)
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    a2 = abs(spec.alpha) ** 2
    cols = _coherent_component_matrix(n_max + 1, spec, eta, 0.0)
    q = np.arange(spec.d)
    w = spec.omega ** (q[:, None] - q[None, :])          # omega^{q-q'}
    weights = _phase_pattern(spec.d, spec.k) * np.exp((w - 1.0) * a2 * (1.0 - eta))
    rho = cols @ weights @ cols.conj().T
    rho /= np.trace(rho).real
    return fock.FockMatrix(rho, 1, (n_max + 1,))


def weak_weights(spec: cats.CatSpec, eta: float) -> tuple:
    """Unnormalized weights (A, B) of the two-term weak-loss mixture."""
    _check_eta(eta)
    x = abs(spec.alpha) ** 2 * (1.0 - eta)
    scaled = spec.with_alpha(spec.alpha * math.sqrt(eta))
    a_w = (1.0 - x) * cats.norm_M(scaled)
    k_prev = (spec.k - 1) % spec.d
    b_w = x * cats.norm_M(cats.CatSpec(spec.d, k_prev, scaled.alpha))
    return a_w, b_w


def lossy_cat_weak(spec: cats.CatSpec, eta: float,
                   n_max: int | None = None) -> fock.FockMatrix:
    """Two-term weak-loss mixture of sector-k and sector-(k-1) cats.

    Valid while ``|alpha|^2 (1 - eta) < 1``; the truncation error of the
    mixture relative to the exact state scales with its square.
    """
    a_w, b_w = weak_weights(spec, eta)
    if a_w <= 0.0:
        raise ApproximationDomainError(
            "weak-loss weight A <= 0: |alpha|^2 (1 - eta) >= 1"
        )
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    scaled_alpha = spec.alpha * math.sqrt(eta)
    k_prev = (spec.k - 1) % spec.d
    main = cats.cat_to_fock(spec.with_alpha(scaled_alpha), n_max)
    prev = cats.cat_to_fock(cats.CatSpec(spec.d, k_prev, scaled_alpha), n_max)
    total = a_w + b_w
    rho = (a_w / total) * main.projector().entries \
        + (b_w / total) * prev.projector().entries
    return fock.FockMatrix(rho, 1, (n_max + 1,))


# ---------------------------------------------------------------------------
# two-arm lossy probe
# ---------------------------------------------------------------------------

def pair_probe_coords(spec: cats.CatSpec, phi: float, basis: PairBasis) -> np.ndarray:
    """Pure probe N (|C>|0> + |0>|C_phi>) in pair-sector coordinates."""
    amps = cats.cat_to_fock(spec, basis.n_max).amps
    shifted = amps * np.exp(1j * phi * np.arange(basis.n_max + 1))
    return probes.probe_norm(spec) * (basis.ket_a(amps) + basis.ket_b(shifted))


@dataclass(frozen=True)
class LossyProbe:
    """The two-arm probe after phase shift ``phi`` and equal-rate loss."""

    spec: cats.CatSpec
    eta: float
    phi: float
    basis: PairBasis
    paper_pair: np.ndarray      # coherent double-sum construction (exact)
    oracle_pair: np.ndarray     # Kraus-channel construction (exact)
    weak_pair: np.ndarray       # two-term weak-loss approximation

    @cached_property
    def paper_form(self) -> fock.FockMatrix:
        return self.basis.embed_matrix(self.paper_pair)

    @cached_property
    def oracle_form(self) -> fock.FockMatrix:
        return self.basis.embed_matrix(self.oracle_pair)

    @cached_property
    def weak_form(self) -> fock.FockMatrix:
        return self.basis.embed_matrix(self.weak_pair)

    @cached_property
    def spectral(self) -> "PaperSpectrum":
        return paper_spectrum(self)


def _paper_pair_matrix(spec, eta, phi, basis) -> np.ndarray:
    """Closed-form lossy probe: coherent components on arm a and arm b."""
    a2 = abs(spec.alpha) ** 2
    n2 = probes.probe_norm(spec) ** 2
    m_norm = cats.norm_M(spec)
    cols = _coherent_component_matrix(basis.n_max + 1, spec, eta, 0.0)
    cols_phi = _coherent_component_matrix(basis.n_max + 1, spec, eta, phi)
    xs = np.stack([basis.ket_a(cols[:, q]) for q in range(spec.d)], axis=1)
    ys = np.stack([basis.ket_b(cols_phi[:, q]) for q in range(spec.d)], axis=1)
    q = np.arange(spec.d)
    w = spec.omega ** (q[:, None] - q[None, :])
    pattern = _phase_pattern(spec.d, spec.k)
    w_diag = pattern * np.exp((w - 1.0) * a2 * (1.0 - eta))
    w_cross = pattern * math.exp(-a2 * (1.0 - eta))
    rho = xs @ w_diag @ xs.conj().T + ys @ w_diag @ ys.conj().T \
        + xs @ w_cross @ ys.conj().T + ys @ w_cross @ xs.conj().T
    return n2 / m_norm * rho


def _weak_pair_matrix(spec, eta, phi, basis) -> np.ndarray:
    """Rank-4 weak-loss probe, normalized to unit trace."""
    a2 = abs(spec.alpha) ** 2
    x = a2 * (1.0 - eta)
    n2 = probes.probe_norm(spec) ** 2
    m_norm = cats.norm_M(spec)
    cols = _coherent_component_matrix(basis.n_max + 1, spec, eta, 0.0)
    cols_phi = _coherent_component_matrix(basis.n_max + 1, spec, eta, phi)
    xs = np.stack([basis.ket_a(cols[:, q]) for q in range(spec.d)], axis=1)
    ys = np.stack([basis.ket_b(cols_phi[:, q]) for q in range(spec.d)], axis=1)
    pat_k = _phase_pattern(spec.d, spec.k)
    pat_prev = _phase_pattern(spec.d, (spec.k - 1) % spec.d)
    rho = (1.0 - x) * (xs @ pat_k @ xs.conj().T + ys @ pat_k @ ys.conj().T) \
        + x * (xs @ pat_prev @ xs.conj().T + ys @ pat_prev @ ys.conj().T) \
        + math.exp(-x) * (xs @ pat_k @ ys.conj().T + ys @ pat_k @ xs.conj().T)
    rho *= n2 / m_norm
    return rho / np.trace(rho).real


def lossy_probe(spec: cats.CatSpec, eta: float, phi: float = 0.0,
                n_max: int | None = None) -> LossyProbe:
    """Build the lossy probe in all three constructions."""
    _check_eta(eta)
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    basis = PairBasis(n_max)
    coords = pair_probe_coords(spec, phi, basis)
    pure = np.outer(coords, coords.conj())
    oracle = basis.apply_loss(pure, eta)
    paper = _paper_pair_matrix(spec, eta, phi, basis)
    weak = _weak_pair_matrix(spec, eta, phi, basis)
    return LossyProbe(spec, eta, phi, basis, paper, oracle, weak)


def lossy_probe_family(spec: cats.CatSpec, eta: float,
                       n_max: int | None = None):
    """phi -> exact lossy probe (pair matrix), for the numeric QFI oracle.

    Loss commutes with the per-mode phase rotation, so the family is the
    phi = 0 state conjugated by the arm-b phase diagonal.
    """
    _check_eta(eta)
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    basis = PairBasis(n_max)
    coords = pair_probe_coords(spec, 0.0, basis)
    rho0 = basis.apply_loss(np.outer(coords, coords.conj()), eta)

    def family(phi: float) -> np.ndarray:
        u = basis.phase_b(phi)
        return u[:, None] * rho0 * u.conj()[None, :]

    return family


def weak_probe_family(spec: cats.CatSpec, eta: float,
                      n_max: int | None = None):
    """phi -> weak-loss probe (pair matrix)."""
    _check_eta(eta)
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    basis = PairBasis(n_max)
    rho0 = _weak_pair_matrix(spec, eta, 0.0, basis)

    def family(phi: float) -> np.ndarray:
        u = basis.phase_b(phi)
        return u[:, None] * rho0 * u.conj()[None, :]

    return family


# ---------------------------------------------------------------------------
# closed-form spectral data of the weak-loss probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PaperSpectrum:
    """Rank-4 spectral data: weights, vectors and their phase derivatives."""

    lambdas: np.ndarray
    raw_weights: np.ndarray
    vectors: tuple       # pair-sector coordinate arrays
    dvectors: tuple      # d/dphi of each vector
    basis: PairBasis
    ortho_residue: float


def paper_spectrum(lp: LossyProbe) -> PaperSpectrum:
    """Closed-form eigensystem of the weak-loss probe.

    Weights are built from the sector normalizations and vacuum overlaps
    of the damped cats; vectors are the symmetric/antisymmetric arm
    combinations of the sector-k and sector-(k-1) cats.  The phase
    derivative of each vector multiplies the arm-b amplitude at photon
    number n by i n.
    """
    spec, eta, phi, basis = lp.spec, lp.eta, lp.phi, lp.basis
    a2 = abs(spec.alpha) ** 2
    x = a2 * (1.0 - eta)
    scaled = spec.with_alpha(spec.alpha * math.sqrt(eta))
    k_prev = (spec.k - 1) % spec.d
    scaled_prev = cats.CatSpec(spec.d, k_prev, scaled.alpha)

    m_ratio_k = cats.norm_M(scaled) / cats.norm_M(spec)
    m_ratio_prev = cats.norm_M(scaled_prev) / cats.norm_M(spec)
    v_k = cats.vacuum_overlap_sq(scaled)
    v_prev = cats.vacuum_overlap_sq(scaled_prev)
    v_in = cats.vacuum_overlap_sq(spec)

    half_sum = 0.5 * (1.0 - x + math.exp(-x))
    half_diff = 0.5 * (1.0 - x - math.exp(-x))
    es = np.array([
        m_ratio_k * (1.0 + v_k) / (1.0 + v_in) * half_sum,
        m_ratio_k * (1.0 - v_k) / (1.0 + v_in) * half_diff,
        m_ratio_prev * (1.0 + v_prev) / (1.0 + v_in) * 0.5 * x,
        m_ratio_prev * (1.0 - v_prev) / (1.0 + v_in) * 0.5 * x,
    ])
    lambdas = es / np.sum(es)

    n_idx = np.arange(basis.n_max + 1)
    vectors, dvectors = [], []
    for sub, overlap in ((scaled, v_k), (scaled_prev, v_prev)):
        amps = cats.cat_to_fock(sub, basis.n_max).amps
        shifted = amps * np.exp(1j * phi * n_idx)
        xvec = basis.ket_a(amps)
        yvec = basis.ket_b(shifted)
        dy = basis.ket_b(1j * n_idx * shifted)
        for sign in (1.0, -1.0):
            denom = 2.0 * (1.0 + sign * overlap)
            if denom < 1e-14:
                vectors.append(np.zeros_like(xvec))
                dvectors.append(np.zeros_like(xvec))
                continue
            scale = 1.0 / math.sqrt(denom)
            vectors.append(scale * (xvec + sign * yvec))
            dvectors.append(scale * sign * dy)

    residue = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            residue = max(residue, abs(np.vdot(vectors[i], vectors[j])))
    return PaperSpectrum(lambdas, es, tuple(vectors), tuple(dvectors),
                         basis, float(residue))
