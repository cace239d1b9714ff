import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratiolab.errors import BranchAmbiguity, PolePoint, PoleProximity
from ratiolab.special import (chi, chi_sqrt, exact_zero_count, g_factor, hardy_z,
                              hurwitz_zeta, incomplete_gamma_upper, log_chi, zeta,
                              zeta_vertical, zeta_zeros_up_to, zero_count_main, z_rmt)

# [DERIVED] frozen from mpmath at 30 digits
ZETA_ORACLE = [
    (0.5 + 100j, 2.692619885681324 - 0.020386029602598162j),
    (3 + 1000j, 0.9661647510345927 - 0.07794906569526988j),
    (0.7 + 5000j, 0.5450818782279421 - 0.25179380383314476j),
]
ZETA_PRIME_ORACLE = (0.5 + 10j, -0.36090737309157184 - 0.0035934407356310654j)
HURWITZ_ORACLE = [
    ((0.7 + 3j, 0.3), -1.9036842955303166 - 1.5035032889664766j),
    ((0.5 + 20j, 0.01), -5.106302303313002 - 9.624158537551152j),
]
CHI_ORACLE = [(0.3 + 50j, -1.3396746665876282 - 0.7055454408857552j),
              (0.8 - 7j, 0.7108034747508696 - 0.6574965650220436j)]
GAMMAINC_ORACLE = [((0.6 + 0.3j, 3.7), 0.012066937121851676 + 0.005897294046398941j),
                   ((1.1, 0.2), 0.811732406774907),
                   ((0.5 - 2j, 40.0), 2.7513828846092946e-19 - 6.030906440491542e-19j)]


def test_zeta_two():
    assert zeta(2.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-12)


@pytest.mark.parametrize("s,expected", ZETA_ORACLE)
def test_zeta_oracle(s, expected):
    assert zeta(s) == pytest.approx(expected, rel=1e-10)


def test_zeta_derivative_oracle():
    s, expected = ZETA_PRIME_ORACLE
    assert zeta(s, deriv=1) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("args,expected", HURWITZ_ORACLE)
def test_hurwitz_oracle(args, expected):
    assert hurwitz_zeta(*args) == pytest.approx(expected, rel=1e-10)


def test_zeta_first_zero():
    assert abs(zeta(0.5 + 14.134725141734693j)) < 1e-10


def test_zeta_pole_guard():
    with pytest.raises(PoleProximity):
        zeta(1 + 1e-7)


def test_zeta_vertical_matches_pointwise():
    t = np.array([3.0, 50.0, 700.0])
    zp, zm = zeta_vertical(t, [0.1, 0.2j], [0.15])
    assert np.allclose(zp[:, 0], zeta(0.6 + 1j * t), rtol=1e-11)
    assert np.allclose(zp[:, 1], zeta(0.5 + 0.2j + 1j * t), rtol=1e-11)
    assert np.allclose(zm[:, 0], zeta(0.65 - 1j * t), rtol=1e-11)
    dp, _ = zeta_vertical(t, [0.1], deriv=1)
    assert np.allclose(dp[:, 0], zeta(0.6 + 1j * t, deriv=1), rtol=1e-10)


@pytest.mark.parametrize("s,expected", CHI_ORACLE)
def test_chi_oracle(s, expected):
    assert chi(s) == pytest.approx(expected, rel=1e-11)


@given(st.floats(0.05, 0.95), st.floats(1.0, 3000.0))
def test_functional_equation_chi_chi(sigma, t):
    # chi(s) chi(1 - s) = 1
    s = sigma + 1j * t
    assert chi(s) * chi(1 - s) == pytest.approx(1.0, rel=1e-9)


@given(st.floats(0.1, 0.9), st.floats(2.0, 200.0))
def test_functional_equation_zeta(sigma, t):
    s = sigma + 1j * t
    assert zeta(s) == pytest.approx(chi(s) * zeta(1 - s), rel=1e-8, abs=1e-12)


def test_chi_sqrt_branch():
    s = 0.5 + np.array([10.0, 20.0])
    assert np.allclose(chi_sqrt(s) ** 2, chi(s))
    with pytest.raises(BranchAmbiguity):
        chi_sqrt(np.array([0.5 - 1j, 0.5 + 1j]))
    with pytest.raises(PolePoint):
        log_chi(3.0)


def test_g_factors_functional_equations():
    # elliptic: symmetric about 1/2, g(s) g(1-s) = 1
    for s in (0.3 + 2j, 0.6, 0.1 - 1j):
        for v in ("plus", "minus", "elliptic"):
            assert g_factor(v, s) * g_factor(v, 1 - s) == pytest.approx(1.0, rel=1e-12)
        assert g_factor("plus", 0.5) == pytest.approx(1.0)


@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=5, allow_nan=False)
       .filter(lambda x: abs(x.imag) < 6))
def test_z_rmt_matches_definition(x):
    assert z_rmt(x) == pytest.approx(1 / (1 - np.exp(-x)), rel=1e-9)


def test_z_rmt_pole():
    with pytest.raises(PolePoint):
        z_rmt(2j * np.pi)


@pytest.mark.parametrize("args,expected", GAMMAINC_ORACLE)
def test_incomplete_gamma_oracle(args, expected):
    assert incomplete_gamma_upper(*args) == pytest.approx(expected, rel=1e-12)


def test_zero_finder():
    zeros = zeta_zeros_up_to(1000)
    assert len(zeros) == 649
    assert zeros[0] == pytest.approx(14.134725141734693, abs=1e-9)
    assert zeros[1] == pytest.approx(21.022039638771555, abs=1e-9)
    assert exact_zero_count(1000.0) == 649
    assert abs(zero_count_main(1000.0) - 649) <= 3
    assert np.all(np.abs(hardy_z(np.asarray(zeros[:20]))) < 1e-8)
