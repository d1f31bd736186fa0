"""NOON, two-mode squeezed vacuum, and SQL reference curves."""

import math

import numpy as np
import pytest

from catqfi import baselines
from catqfi.errors import ParameterError, TruncationError


# ---------------------------------------------------------------------------
# NOON
# ---------------------------------------------------------------------------

def test_noon_lossless_is_k_squared():
    for k in range(1, 7):
        assert baselines.noon_qfi(k, 1.0).f_q == k * k


def test_noon_single_photon():
    assert baselines.noon_qfi(1, 1.0).f_q == 1.0


def test_noon_lossy_oracle_matches_analytic_decay():
    # the oracle result must reproduce eta^k k^2, which it does not assume
    for k, eta in ((1, 0.9), (2, 0.85), (4, 0.9)):
        res = baselines.noon_qfi(k, eta)
        assert res.f_q == pytest.approx(eta ** k * k * k, rel=1e-10)
        assert res.f_q < k * k


def test_noon_monotone_under_loss():
    for k in (1, 2, 4):
        seq = [baselines.noon_qfi(k, eta).f_q for eta in (1.0, 0.95, 0.9)]
        assert seq[0] > seq[1] > seq[2]


def test_noon_rejects_zero_photons():
    with pytest.raises(ParameterError):
        baselines.noon_qfi(0, 1.0)


def test_noon_curve_continuous_extension():
    assert baselines.noon_curve_qfi(2.0, 1.0) == pytest.approx(16.0, rel=1e-12)
    assert baselines.noon_curve_qfi(2.0, 0.9) == pytest.approx(
        0.9 ** 4 * 16.0, rel=1e-12)


# ---------------------------------------------------------------------------
# TMSV
# ---------------------------------------------------------------------------

def test_tmsv_lossless_identity_unit_energy():
    r = baselines.tmsv_r_for_nav(1.0)
    res = baselines.tmsv_qfi(r, 1.0)
    assert res.f_q == pytest.approx(8.0, rel=1e-8)


@pytest.mark.parametrize("n_av", [0.25, 1.0, 4.0])
def test_tmsv_lossless_identity_grid(n_av):
    r = baselines.tmsv_r_for_nav(n_av)
    res = baselines.tmsv_qfi(r, 1.0)
    assert res.f_q == pytest.approx(4.0 * n_av * (n_av + 1.0), rel=1e-8)


def test_tmsv_small_squeezing_vanishes():
    assert baselines.tmsv_qfi(1e-4, 1.0).f_q < 1e-6


def test_tmsv_lossy_below_lossless():
    r = baselines.tmsv_r_for_nav(1.0)
    res = baselines.tmsv_qfi(r, 0.9)
    assert res.f_q < 8.0
    assert res.diagnostics["n_av"] == pytest.approx(1.0, rel=1e-12)


def test_tmsv_truncation_cap():
    with pytest.raises(TruncationError):
        baselines.tmsv_qfi(baselines.tmsv_r_for_nav(12.0), 1.0)


def test_tmsv_energy_inversion():
    for n_av in (0.3, 2.2):
        r = baselines.tmsv_r_for_nav(n_av)
        assert math.sinh(r) ** 2 == pytest.approx(n_av, rel=1e-12)


# ---------------------------------------------------------------------------
# SQL and spec plumbing
# ---------------------------------------------------------------------------

def test_sql_examples():
    assert baselines.sql_bound(1.0) == 1.0
    assert baselines.sql_bound(4.0) == 0.5
    assert baselines.sql_bound(2.0) == pytest.approx(1 / math.sqrt(2), rel=1e-12)


def test_sql_rejects_nonpositive():
    with pytest.raises(ParameterError):
        baselines.sql_bound(0.0)


def test_baseline_spec_validation():
    baselines.BaselineSpec("noon", 3)
    with pytest.raises(ParameterError):
        baselines.BaselineSpec("noon", 2.5)
    with pytest.raises(ParameterError):
        baselines.BaselineSpec("squeezed", 1.0)
    with pytest.raises(ParameterError):
        baselines.BaselineSpec("sql", -1.0)
