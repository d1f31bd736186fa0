"""Exact simulation of the cat-generation protocol.

Stage 1 mixes a small cat with a coherent state on the 50:50
beamsplitter and applies a pi shifter, leaving the two-arm entangled
coherent state.  Stage 2 couples each arm to its own strong coherent
ancilla through a cross-phase modulator, so the ancilla phase sector
records the arm's photon-number residue mod d.  Heterodyne readout is
idealized as amplitude projection onto the d ancilla pointer states
with nearest-sector binning; the misidentification mass between
pointers is the coherent-overlap leakage reported on every outcome.

The conditional signal states are exact: projecting the ancillae
reduces to multiplying each signal amplitude by a residue-dependent
pointer overlap, so no joint four-mode tensor is ever materialized.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import cats, fock, probes
from .errors import ParameterError

LEAKAGE_FLAG = 1e-3


@dataclass(frozen=True)
class GenConfig:
    d: int
    alpha: complex
    beta: float
    shots: int = 10000
    seed: int = 0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ParameterError("d must be an integer >= 2")
        if self.beta <= 0:
            raise ParameterError("ancilla amplitude beta must be positive")
        if self.shots < 1:
            raise ParameterError("shots must be >= 1")
        if self.beta < self.d:
            warnings.warn(
                f"ancilla beta={self.beta} below d={self.d}: sector overlap "
                "leakage may be significant"
            )


@dataclass(frozen=True)
class GenOutcome:
    k_observed: tuple            # one entry per measured arm
    probability: float
    conditional_fidelity: float
    leakage: float
    leakage_flagged: bool


def default_beta(d: int) -> float:
    return 1.5 * d


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def bs_stage(alpha: complex) -> fock.FockVector:
    """Beamsplitter + pi shifter: cat times coherent in, |a>|0> + |0>|a> out."""
    n_max = fock.required_n_max(alpha)
    half = alpha / math.sqrt(2.0)
    cat_in = fock.add(fock.coherent_vector(half, n_max),
                      fock.coherent_vector(-half, n_max)).normalize()
    coh_in = fock.coherent_vector(half, n_max)
    mixed = fock.beamsplitter_50_50(fock.product(cat_in, coh_in))
    return fock.apply_phase_shift(mixed, math.pi, mode=1)


def bs_stage_target(alpha: complex, n_max: int) -> fock.FockVector:
    amps = fock.coherent_amplitudes(alpha, n_max)
    basis_vac = np.zeros(n_max + 1, dtype=np.complex128)
    basis_vac[0] = 1.0
    raw = np.outer(amps, basis_vac) + np.outer(basis_vac, amps)
    return fock.FockVector(raw, 2).normalize()


def cpm_stage(alpha: complex, beta: float, d: int) -> fock.FockVector:
    """Cross-Kerr coupling of signal |alpha> to ancilla |beta>.

    The output decomposes over sectors as sum_k sqrt(M_k)/d |C_k>|beta w^k>;
    the ancilla dimension is set by beta, and the hard cap can bind when
    beta (>= d) is large.
    """
    if int(d) != d or d < 2:
        raise ParameterError("d must be an integer >= 2")
    if beta < d:
        warnings.warn(f"beta={beta} below d={d}: pointer states overlap")
    n_sig = fock.required_n_max(alpha)
    n_anc = fock.required_n_max(beta)
    joint = fock.product(fock.coherent_vector(alpha, n_sig),
                         fock.coherent_vector(beta, n_anc))
    return fock.cross_kerr_unitary(joint, d)


# ---------------------------------------------------------------------------
# heterodyne conditioning
# ---------------------------------------------------------------------------

def pointer_overlap(beta: float, d: int, k: int, r: int) -> complex:
    """<beta w^k | beta w^r> for the d ancilla pointer states."""
    w = np.exp(2j * math.pi / d)
    return np.exp(-beta * beta * (1.0 - w ** ((r - k) % d)))


def leakage_bound(d: int, beta: float) -> float:
    """Sum of |<beta w^j|beta w^k>| over j != k (k-independent)."""
    w = np.exp(2j * math.pi / d)
    return float(sum(
        math.exp(-0.5 * abs(beta * (w ** m - 1.0)) ** 2) for m in range(1, d)
    ))


def heterodyne_condition(state: fock.FockVector, d: int, beta: float,
                         seed: int | None = None,
                         alpha: complex | None = None) -> list:
    """Condition a signal + ancilla state on each binned heterodyne sector.

    Returns one GenOutcome per sector k with normalized probability and
    the exact conditional signal state's fidelity to the sector-k cat of
    amplitude ``alpha`` (recovered from the signal marginal when not
    given, which pins only its modulus).  The ``seed`` only matters to
    callers that sample; conditioning itself is deterministic.
    """
    if state.modes != 2:
        raise ParameterError("expected a signal (x) ancilla two-mode state")
    n_anc = state.amps.shape[1] - 1
    if alpha is None:
        alpha = _signal_alpha(state)
    leak = leakage_bound(d, beta)
    raw = []
    conditionals = []
    for k in range(d):
        anc = fock.coherent_amplitudes(beta * np.exp(2j * math.pi * k / d), n_anc)
        signal = state.amps @ anc.conj()
        raw.append(float(np.sum(np.abs(signal) ** 2)))
        conditionals.append(signal)
    total = sum(raw)
    outcomes = []
    for k in range(d):
        signal = conditionals[k]
        norm = math.sqrt(raw[k]) if raw[k] > 0 else 1.0
        target = cats.cat_to_fock(cats.CatSpec(d, k, alpha), signal.size - 1)
        fid = abs(np.vdot(target.amps, signal / norm)) ** 2
        outcomes.append(GenOutcome((k,), raw[k] / total, float(fid),
                                   leak, leak > LEAKAGE_FLAG))
    return outcomes


def _signal_alpha(state: fock.FockVector) -> complex:
    # modulus recovered from the signal marginal mean photon number
    p = np.sum(np.abs(state.amps) ** 2, axis=1)
    mean = float(np.sum(np.arange(p.size) * p) / np.sum(p))
    return math.sqrt(mean)


# ---------------------------------------------------------------------------
# full protocol
# ---------------------------------------------------------------------------

def _target_pair(d: int, k: int, alpha: complex, n_max: int) -> np.ndarray:
    spec = cats.CatSpec(d, k, alpha)
    amps = cats.cat_to_fock(spec, n_max).amps
    vac = np.zeros(n_max + 1, dtype=np.complex128)
    vac[0] = 1.0
    raw = np.outer(amps, vac) + np.outer(vac, amps)
    return raw * probes.probe_norm(spec)


def end_to_end(cfg: GenConfig) -> list:
    """Exact joint conditioning of the two-arm protocol, all outcome pairs.

    The two cross-phase modulators imprint each arm's residue on its own
    ancilla, so projecting both ancillae multiplies the two-arm signal
    amplitude at (n_a, n_b) by pointer overlaps f(k1, n_a mod d) and
    f(k2, n_b mod d).  A vacuum arm leaves its ancilla exactly at the
    k = 0 pointer.  For matched outcomes the reported fidelity is
    against the entangled sector-k target; for mixed pairs it is against
    the target of the arm that reported a nonzero sector.
    """
    entangled = bs_stage(cfg.alpha)
    n_max = entangled.amps.shape[0] - 1
    residues = np.arange(n_max + 1) % cfg.d
    overlaps = np.empty((cfg.d, cfg.d), dtype=np.complex128)
    for k in range(cfg.d):
        for r in range(cfg.d):
            overlaps[k, r] = pointer_overlap(cfg.beta, cfg.d, k, r)
    leak = leakage_bound(cfg.d, cfg.beta)

    raw = np.empty((cfg.d, cfg.d))
    fids = np.empty((cfg.d, cfg.d))
    for k1 in range(cfg.d):
        f1 = overlaps[k1][residues]
        for k2 in range(cfg.d):
            f2 = overlaps[k2][residues]
            signal = entangled.amps * f1[:, None] * f2[None, :]
            weight = float(np.sum(np.abs(signal) ** 2))
            raw[k1, k2] = weight
            # matched pairs herald the sector-k entangled target; on a
            # mixed pair the nonzero-sector arm names the target
            if k1 == k2 or k2 == 0:
                k_target = k1
            elif k1 == 0:
                k_target = k2
            else:
                k_target = k1
            if weight <= 0.0 or (cfg.alpha == 0 and k_target != 0):
                fids[k1, k2] = 0.0      # degenerate target sector
                continue
            target = _target_pair(cfg.d, k_target, cfg.alpha, n_max)
            fids[k1, k2] = abs(np.vdot(target, signal)) ** 2 / weight

    total = raw.sum()
    outcomes = []
    for k1 in range(cfg.d):
        for k2 in range(cfg.d):
            outcomes.append(GenOutcome(
                (k1, k2), raw[k1, k2] / total, float(fids[k1, k2]),
                2.0 * leak, 2.0 * leak > LEAKAGE_FLAG,
            ))
    return outcomes


def shot_histogram(outcomes: list, shots: int, seed: int) -> np.ndarray:
    """Sample outcome frequencies with per-shot derived random streams.

    Each shot draws from its own spawned stream, so the histogram is
    a pure function of (outcomes, shots, seed) no matter how callers
    schedule the shots.
    """
    probs = np.array([o.probability for o in outcomes])
    edges = np.cumsum(probs)
    edges[-1] = max(edges[-1], 1.0)
    counts = np.zeros(len(outcomes), dtype=np.int64)
    children = np.random.SeedSequence(seed).spawn(shots)
    for child in children:
        u = np.random.default_rng(child).random()
        counts[int(np.searchsorted(edges, u, side="right"))] += 1
    return counts
