"""Compact representation of two-mode states supported on one excited arm.

Every probe here and everything pure loss does to it lives in the span
of ``{|n,0>, |0,n>}``: equal-rate loss maps the one-excited-arm sector to
itself, and the interferometer phase shift is diagonal on it.  Working in
this (2 n_max + 1)-dimensional basis instead of the full two-mode product
space turns the exact lossy-probe spectral computations from O(n^6) into
O(n^3).  Embedding back into the full space is exact, which is how the
representation itself is validated against the full Kraus oracle.

Basis order: index 0 is |0,0>; indices 1..N are |n,0>; N+1..2N are |0,n>.
"""

from __future__ import annotations

import numpy as np

from . import fock, kernels
from .errors import ShapeError


class PairBasis:
    """Index bookkeeping for the one-excited-arm sector at a given n_max."""

    def __init__(self, n_max: int):
        self.n_max = int(n_max)
        self.dim = 2 * self.n_max + 1
        self.idx_a = np.arange(0, self.n_max + 1)                  # e0 + a part
        self.idx_b = np.concatenate(([0], np.arange(self.n_max + 1, self.dim)))
        n = np.arange(1, self.n_max + 1)
        self.n_b = np.concatenate((np.zeros(self.n_max + 1), n))   # n_b per index
        self.n_a = np.concatenate(([0.0], n, np.zeros(self.n_max)))

    # -- vector constructors ------------------------------------------------

    def ket_a(self, amps: np.ndarray) -> np.ndarray:
        """Coordinates of |v>|0> from one-mode amplitudes of |v>."""
        if amps.size != self.n_max + 1:
            raise ShapeError("amplitude length does not match basis")
        out = np.zeros(self.dim, dtype=np.complex128)
        out[: self.n_max + 1] = amps
        return out

    def ket_b(self, amps: np.ndarray) -> np.ndarray:
        """Coordinates of |0>|v>."""
        if amps.size != self.n_max + 1:
            raise ShapeError("amplitude length does not match basis")
        out = np.zeros(self.dim, dtype=np.complex128)
        out[0] = amps[0]
        out[self.n_max + 1:] = amps[1:]
        return out

    # -- diagonal operators ---------------------------------------------------

    def phase_b(self, phi: float) -> np.ndarray:
        """Diagonal of e^{i phi n_b}."""
        return np.exp(1j * phi * self.n_b)

    def phase_half_diff(self, phi: float) -> np.ndarray:
        """Diagonal of e^{-i phi (n_a - n_b)/2}."""
        return np.exp(-0.5j * phi * (self.n_a - self.n_b))

    # -- channels ------------------------------------------------------------

    def apply_loss(self, mat: np.ndarray, eta: float) -> np.ndarray:
        """Equal-rate pure loss on both arms, exactly, within the sector.

        The a-sector (with the shared vacuum) sees the single-mode Kraus
        map, likewise the b-sector (vacuum counted once), and the
        cross-arm coherences are damped elementwise by eta^{(n+n')/2}.
        """
        if eta == 1.0:
            return mat.copy()
        n1 = self.n_max + 1
        coeff = fock.loss_coefficients(self.n_max, eta)
        out = np.zeros_like(mat)
        sub_a = np.ascontiguousarray(mat[np.ix_(self.idx_a, self.idx_a)])
        out[np.ix_(self.idx_a, self.idx_a)] = kernels.loss_single_mode(sub_a, coeff)
        sub_b = np.ascontiguousarray(mat[np.ix_(self.idx_b, self.idx_b)])
        sub_b[0, 0] = 0.0   # vacuum corner already carried by the a-sector
        out[np.ix_(self.idx_b, self.idx_b)] += kernels.loss_single_mode(sub_b, coeff)
        n = np.arange(1, n1)
        damp = eta ** (0.5 * n)
        out[1:n1, n1:] = mat[1:n1, n1:] * np.outer(damp, damp)
        out[n1:, 1:n1] = mat[n1:, 1:n1] * np.outer(damp, damp)
        return out

    # -- embeddings ----------------------------------------------------------

    def embed_vector(self, coords: np.ndarray) -> fock.FockVector:
        n1 = self.n_max + 1
        amps = np.zeros((n1, n1), dtype=np.complex128)
        amps[:, 0] = coords[:n1]
        amps[0, 1:] = coords[n1:]
        return fock.FockVector(amps, 2)

    def embed_matrix(self, mat: np.ndarray) -> fock.FockMatrix:
        n1 = self.n_max + 1
        basis = np.zeros((self.dim, n1 * n1), dtype=np.complex128)
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0
            basis[i] = self.embed_vector(e).amps.reshape(-1)
        full = basis.T @ mat @ basis.conj()
        return fock.FockMatrix(full, 2, (n1, n1))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(w)))
