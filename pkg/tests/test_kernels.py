"""Backend equivalence: the active kernel set must match the numpy reference."""

import numpy as np
import pytest

from catqfi import kernels
from catqfi.fock import loss_coefficients

rng = np.random.default_rng(99)


def random_hermitian(n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def test_active_backend_reported():
    assert kernels.active_backend() in ("numba", "numpy")


@pytest.mark.parametrize("n,eta", [(6, 0.8), (21, 0.93), (40, 0.5)])
def test_loss_single_mode_matches_reference(n, eta):
    mat = random_hermitian(n)
    coeff = loss_coefficients(n - 1, eta)
    out = kernels.loss_single_mode(mat, coeff)
    ref = kernels.loss_single_mode_ref(mat, coeff)
    assert np.max(np.abs(out - ref)) < 1e-13


def test_loss_first_mode_matches_reference():
    na, nb = 9, 7
    t4 = (rng.normal(size=(na, nb, na, nb))
          + 1j * rng.normal(size=(na, nb, na, nb)))
    coeff = loss_coefficients(na - 1, 0.87)
    out = kernels.loss_first_mode(t4, coeff)
    ref = kernels.loss_first_mode_ref(t4, coeff)
    assert np.max(np.abs(out - ref)) < 1e-13


@pytest.mark.parametrize("delta", [0, 1, 5])
def test_lossy_tmsv_block_matches_reference(delta):
    n_max = 25
    schmidt = 0.6 ** np.arange(n_max + 1)
    coeff = loss_coefficients(n_max, 0.9)
    out = kernels.lossy_tmsv_block(schmidt, coeff, delta)
    ref = kernels.lossy_tmsv_block_ref(schmidt, coeff, delta)
    assert out.shape == (n_max + 1 - delta,) * 2
    assert np.max(np.abs(out - ref)) < 1e-13


def test_qfi_pair_sum_matches_reference():
    n = 17
    tmat = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    lam = np.abs(rng.normal(size=n))
    lam[3] = 0.0
    lam[5] = 0.0
    total, skipped, hits = kernels.qfi_pair_sum(tmat, lam, 1e-12)
    ref_total, ref_skipped, ref_hits = kernels.qfi_pair_sum_ref(tmat, lam, 1e-12)
    assert total == pytest.approx(ref_total, rel=1e-13)
    assert skipped == pytest.approx(ref_skipped, rel=1e-13)
    assert hits == ref_hits == 4   # the 2x2 zero-lambda block
