"""Closed-form quantities of generalized multi-component cat states.

A cat state here is the equal-weight superposition of ``d`` coherent
states on a phase-space circle, with relative phases set by an integer
``k``; it occupies only photon numbers ``n = k (mod d)``.  All moments
are evaluated by direct summation over that photon-number sector, which
is numerically stable at large ``d``; the double coherent-overlap sum is
kept as an independent cross-check path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import ParameterError

# Moments of the k = 0 cat lose meaning at alpha = 0 (vacuum); they are
# reported as the sector-sum limit evaluated at this clamped amplitude.
ALPHA_CLAMP = 1e-8


@dataclass(frozen=True)
class CatSpec:
    """One generalized cat state: components d, sector k, amplitude alpha."""

    d: int
    k: int
    alpha: complex

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError("d must be a positive integer")
        if int(self.k) != self.k or not 0 <= self.k < self.d:
            raise ParameterError("k must be an integer in [0, d)")
        if self.alpha == 0 and self.k != 0:
            raise ParameterError(
                "alpha = 0 with k != 0 is degenerate (zero normalization)"
            )

    @property
    def omega(self) -> complex:
        return np.exp(2j * math.pi / self.d)

    def with_alpha(self, alpha: complex) -> "CatSpec":
        return CatSpec(self.d, self.k, alpha)


@dataclass(frozen=True)
class CatMoments:
    norm_M: float
    mean_n: float
    mean_n2: float
    g2: float
    mandel_q: float


def _sector_terms(d: int, k: int, a2: float):
    """Photon numbers n = k (mod d) and weights d^2 e^{-a2} a2^n / n!."""
    n_max = fock.required_n_max(math.sqrt(a2))
    ns = np.arange(k, n_max + 1, d)
    if a2 == 0.0:
        w = np.where(ns == 0, float(d * d), 0.0)
        return ns, w
    log_w = 2.0 * math.log(d) - a2 + ns * math.log(a2) - np.array(
        [math.lgamma(n + 1) for n in ns]
    )
    return ns, np.exp(log_w)


def norm_M(spec: CatSpec) -> float:
    """Normalization M_{d,k}(alpha) via the mod-d Poisson sector sum."""
    _, w = _sector_terms(spec.d, spec.k, abs(spec.alpha) ** 2)
    return float(np.sum(w))


def norm_M_double_sum(spec: CatSpec) -> float:
    """Cross-check path: the double coherent-overlap sum over (q, q')."""
    d, k = spec.d, spec.k
    a2 = abs(spec.alpha) ** 2
    q = np.arange(d)
    diff = q[:, None] - q[None, :]          # q - q'
    w = spec.omega ** diff
    total = np.sum(w ** (-k) * np.exp((w - 1.0) * a2))
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise ParameterError(f"overlap sum not real: {total}")
    return float(total.real)


def vacuum_overlap_sq(spec: CatSpec) -> float:
    """|<0|C_{d,k}(alpha)>|^2; nonzero only in the k = 0 sector."""
    if spec.k != 0:
        return 0.0
    a2 = abs(spec.alpha) ** 2
    return float(spec.d ** 2 * math.exp(-a2) / norm_M(spec))


def cat_moments(spec: CatSpec) -> CatMoments:
    """Photon statistics of the cat from normalized sector weights.

    The phase of alpha provably drops out of every sector sum, so only
    |alpha| enters.  For k = 0 the alpha -> 0 limit is taken at a clamped
    amplitude instead of evaluating 0/0.
    """
    a2 = abs(spec.alpha) ** 2
    m = float(np.sum(_sector_terms(spec.d, spec.k, a2)[1]))
    if spec.k == 0 and a2 < ALPHA_CLAMP ** 2:
        a2 = ALPHA_CLAMP ** 2
    ns, w = _sector_terms(spec.d, spec.k, a2)
    p = w / np.sum(w)
    mean_n = float(np.sum(ns * p))
    mean_n2 = float(np.sum(ns.astype(float) ** 2 * p))
    pair = float(np.sum(ns * (ns - 1.0) * p))   # <a^dag a^dag a a>
    if mean_n == 0.0:
        # deep vacuum limit: every excited sector weight underflowed
        return CatMoments(m, 0.0, 0.0, math.inf, 0.0)
    ratio = pair / mean_n
    g2 = ratio / mean_n          # may overflow to inf for k = 0, alpha -> 0
    return CatMoments(m, mean_n, mean_n2, g2, ratio - mean_n)


def fidelity_to_number_state(spec: CatSpec) -> float:
    """Overlap squared with the ideal number state |k>.

    Equals d^2 e^{-|alpha|^2} |alpha|^{2k} / (k! M_{d,k}), i.e. the
    normalized sector weight at n = k; tends to 1 as alpha -> 0 at fixed
    d and as d -> infinity at fixed alpha.
    """
    a2 = abs(spec.alpha) ** 2
    m = norm_M(spec)
    if a2 == 0.0:
        return spec.d ** 2 / m      # k = 0 only; equals 1
    log_w = (
        2.0 * math.log(spec.d) - a2 + spec.k * math.log(a2)
        - math.lgamma(spec.k + 1)
    )
    return math.exp(log_w) / m


def cat_to_fock(spec: CatSpec, n_max: int | None = None) -> fock.FockVector:
    """Number-basis realization, supported only on n = k (mod d)."""
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    amps = fock.coherent_amplitudes(spec.alpha, n_max)
    mask = (np.arange(n_max + 1) % spec.d) == spec.k
    amps = np.where(mask, amps, 0.0) * spec.d / math.sqrt(norm_M(spec))
    return fock.FockVector(amps, 1).normalize()


def coherent_from_cats(spec_d: int, alpha: complex, q: int,
                       n_max: int | None = None) -> fock.FockVector:
    """Reconstruct |alpha w^q> from the cat superposition identity."""
    if n_max is None:
        n_max = fock.required_n_max(alpha)
    omega = np.exp(2j * math.pi / spec_d)
    total = np.zeros(n_max + 1, dtype=np.complex128)
    for k in range(spec_d):
        spec = CatSpec(spec_d, k, alpha)
        coeff = omega ** (k * q) * math.sqrt(norm_M(spec)) / spec_d
        total += coeff * cat_to_fock(spec, n_max).amps
    return fock.FockVector(total, 1)
