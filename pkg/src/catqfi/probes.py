"""Path-symmetric entangled probes built from cat states.

The probe is ``N (|C>|0> + |0>|C>)`` over interferometer arms a and b.
Its per-arm energy ``N_av = <n_b>`` is the x-axis of every sweep; the
same per-mode convention is applied to all baselines.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import cats, fock
from .errors import ParameterError, ShapeError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbeState:
    spec: cats.CatSpec
    norm_N: float
    n_av: float
    vector: fock.FockVector     # normalized two-mode realization


@dataclass(frozen=True)
class PhaseAveragedProbe:
    """Common-phase average of a probe: a mixture of per-n NOON projectors.

    ``weights`` are the sector-Poisson probabilities P_n (renormalized
    after truncation).  The density-matrix realization additionally
    carries the vacuum-component correction that makes the mixture the
    exact common-phase average of the pure probe.
    """

    spec: cats.CatSpec
    ns: np.ndarray
    weights: np.ndarray          # P_n, sum to 1
    mixture_weights: np.ndarray  # physical mixture weights, sum to 1

    def block_family(self, generator: str = "nb"):
        """phi -> list of per-n blocks of the averaged state.

        generator 'nb' applies e^{i phi n_b}; 'half_diff' applies
        e^{-i phi (n_a - n_b)/2}.  Block n is 2x2 over {|n,0>, |0,n>}
        (1x1 for n = 0).
        """
        if generator not in ("nb", "half_diff"):
            raise ParameterError(f"unknown generator {generator!r}")
        ns = self.ns
        weights = self.mixture_weights

        def family(phi: float):
            blocks = []
            for n, w in zip(ns, weights):
                if n == 0:
                    blocks.append(np.array([[w]], dtype=np.complex128))
                    continue
                if generator == "nb":
                    u = np.array([1.0, np.exp(1j * phi * n)])
                else:
                    u = np.array([np.exp(-0.5j * phi * n), np.exp(0.5j * phi * n)])
                base = 0.5 * w * np.ones((2, 2), dtype=np.complex128)
                blocks.append(u[:, None] * base * u.conj()[None, :])
            return blocks

        return family

    def to_fock_matrix(self, n_max: int | None = None) -> fock.FockMatrix:
        if n_max is None:
            n_max = fock.required_n_max(self.spec.alpha)
        dim = n_max + 1
        rho = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
        for n, w in zip(self.ns, self.mixture_weights):
            if n > n_max:
                raise ShapeError("sector extends beyond requested truncation")
            vec = np.zeros((dim, dim), dtype=np.complex128)
            if n == 0:
                vec[0, 0] = 1.0
            else:
                vec[n, 0] = vec[0, n] = 1.0 / math.sqrt(2.0)
            flat = vec.reshape(-1)
            rho += w * np.outer(flat, flat.conj())
        return fock.FockMatrix(rho, 2, (dim, dim))


def probe_norm(spec: cats.CatSpec) -> float:
    """Normalization N = [2 (1 + |<0|C>|^2)]^{-1/2}; exactly 2^{-1/2} for k != 0."""
    return 1.0 / math.sqrt(2.0 * (1.0 + cats.vacuum_overlap_sq(spec)))


def build_probe(spec: cats.CatSpec, n_max: int | None = None) -> ProbeState:
    """Construct N (|C>|0> + |0>|C>) with its two-mode Fock realization."""
    if n_max is None:
        n_max = fock.required_n_max(spec.alpha)
    cat = cats.cat_to_fock(spec, n_max)
    vac = fock.vacuum_vector(n_max)
    raw = fock.add(fock.product(cat, vac), fock.product(vac, cat))
    vec = fock.scale(raw, probe_norm(spec))
    norm_n = probe_norm(spec)
    n_av = norm_n ** 2 * cats.cat_moments(spec).mean_n
    return ProbeState(spec, norm_n, n_av, vec)


def probe_moments(spec: cats.CatSpec) -> tuple:
    """(<n_b>, <n_b^2>) of the probe.

    Evaluated through the photon-number-sector sums, which are the
    term-by-term resummation of the closed two-index component sums and
    stay accurate in the small-alpha limit where the component sums
    cancel catastrophically (the cross-check path below keeps the
    two-index form verbatim).
    """
    mom = cats.cat_moments(spec)
    n2 = probe_norm(spec) ** 2
    return n2 * mom.mean_n, n2 * mom.mean_n2


def probe_moments_double_sum(spec: cats.CatSpec) -> tuple:
    """Verbatim two-index component sums for (<n_b>, <n_b^2>).

    Cross-check path only: each moment cancels down to O(a^{2k}) out of
    O(a^2) terms, so this loses all precision for small alpha at k >= 2.
    The imaginary residue must stay below 1e-12 of the result.
    """
    d, k = spec.d, spec.k
    a2 = abs(spec.alpha) ** 2
    n2 = probe_norm(spec) ** 2
    m = cats.norm_M(spec)
    q = np.arange(d)
    diff = q[:, None] - q[None, :]              # q - q'
    w = spec.omega ** diff
    kernel = np.exp((w - 1.0) * a2) * w ** (-k)     # omega^{k(q'-q)} factor
    mean = n2 / m * np.sum(kernel * a2 * w)
    mean2 = n2 / m * np.sum(kernel * (a2 * w + a2 ** 2 * w ** 2))
    for val, name in ((mean, "mean_nb"), (mean2, "mean_nb2")):
        if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
            raise ParameterError(f"{name} has imaginary residue {val.imag:.3e}")
    return float(mean.real), float(mean2.real)


def n_av_of(spec: cats.CatSpec) -> float:
    """Per-arm average photon number of the lossless probe."""
    return probe_norm(spec) ** 2 * cats.cat_moments(spec).mean_n


def phase_averaged(spec: cats.CatSpec) -> PhaseAveragedProbe:
    """Average the probe over a common phase on both arms.

    Coherences between different total photon numbers vanish, leaving a
    mixture of per-n NOON projectors with sector-Poisson weights; the
    n = 0 component (k = 0 only) collapses to the two-mode vacuum and
    carries twice its raw weight through the probe normalization.
    """
    a2 = abs(spec.alpha) ** 2
    ns, w = cats._sector_terms(spec.d, spec.k, a2)
    p = w / np.sum(w)
    renorm = abs(1.0 - float(np.sum(w)) / cats.norm_M(spec))
    if renorm > 1e-12:
        log.info("phase-averaged weights renormalized by %.3e", renorm)
    n2 = probe_norm(spec) ** 2
    mix = 2.0 * n2 * p
    if spec.k == 0:
        mix[0] *= 2.0
    mix = mix / np.sum(mix)
    ns = np.array(ns)
    ns.flags.writeable = False
    for arr in (p, mix):
        arr.flags.writeable = False
    return PhaseAveragedProbe(spec, ns, p, mix)
