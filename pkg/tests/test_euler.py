import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratiolab.arithmetic import e11_coefficients, primes_up_to
from ratiolab.errors import InvalidInput, TailNotConverged
from ratiolab.euler import (
    _symmetric_prefactor, a_elliptic, a_quadratic, a_zeta, discrete_prime_sum,
    discrete_swap_product, elliptic_local_closed, elliptic_local_direct, ks_b,
    ks_local_closed, ks_local_lattice, lambda_prime_powers, logderiv_c, logderiv_c_closed,
    prime_log_square_sum, quadratic_local_closed, quadratic_local_direct, y_factor,
    zeta_local_lattice, zeta_local_theta, zeta_prefactor)
from ratiolab.shifts import EulerConfig, ShiftSet
from ratiolab.special import zeta

LAM = e11_coefficients(20_000).lam

# 20 shift sets across block sizes, signs and complex values
GRID = [
    ShiftSet([0.1], [0.12], [0.15], [0.2]),
    ShiftSet([-0.1], [0.3], [0.2], [0.05]),
    ShiftSet([0.25, -0.2], [0.1], [0.3], [0.15]),
    ShiftSet([0.1 + 0.2j], [0.1 - 0.2j], [0.3], [0.3]),
    ShiftSet([0.4], [-0.4], [0.2], [0.2]),
    ShiftSet([0.05, 0.1, 0.15], [0.2], [0.25], [0.3]),
    ShiftSet([0.1], [], [], [0.2]),
    ShiftSet([0.2], [0.3]),
    ShiftSet([], [], [0.2], [0.3]),
    ShiftSet([-0.3, 0.3], [0.3, -0.3], [0.1], [0.1]),
    ShiftSet([0.1], [0.12], [0.15, 0.3], [0.2]),
    ShiftSet([0.45], [0.45], [0.45], [0.45]),
    ShiftSet([-0.45], [-0.45], [0.1], [0.1]),
    ShiftSet([0.2j], [-0.2j], [0.3 + 0.1j], [0.3 - 0.1j]),
    ShiftSet([0.1, 0.2], [0.3, 0.4], [0.15, 0.25], [0.35, 0.05]),
    ShiftSet([0.33], [0.01], [0.2], [0.4]),
    ShiftSet([-0.2], [-0.1], [0.3], [0.4]),
    ShiftSet([0.15], [0.15], [0.15], [0.15]),
    ShiftSet([0.05], [0.05], [0.05, 0.1], [0.07]),
    ShiftSet([0.3, 0.2, 0.1], [], [0.1, 0.2], [0.3]),
]
SYM_GRID = [([0.1], [0.2]), ([-0.1], [0.2]), ([0.1, 0.3], [0.2]), ([0.2], [0.1, 0.3]),
            ([-0.2, 0.1], [0.15]), ([0.1 + 0.1j], [0.2]), ([0.45], [0.45]), ([-0.45], [0.3]),
            ([0.05], []), ([], [0.2]), ([0.2, 0.25, 0.3], [0.1, 0.4]), ([0.3], [0.3, 0.1]),
            ([0.1j], [0.1]), ([-0.3, -0.2], [0.2, 0.3]), ([0.15], [0.35]), ([0.4], [0.05]),
            ([-0.05], [0.05]), ([0.2, 0.2], [0.1]), ([0.3], [-0.1]), ([0.12, 0.34], [0.21, 0.05])]
PRIMES = np.array([2, 3, 5, 11])


def test_y_factor_unitary_display():
    s = ShiftSet([0.1], [0.12], [0.15], [0.2])
    expected = zeta(1.22) * zeta(1.35) / (zeta(1.3) * zeta(1.27))
    assert y_factor("U", s) == pytest.approx(expected, rel=1e-12)
    assert y_factor("U", ShiftSet([0.1], [0.2], [0.1], [0.2])) == pytest.approx(1.0)


def test_y_factor_small_shift_asymptotic():
    a, b, g, d = 1e-4 * np.array([1.0, 1.3, 1.7, 2.2])
    approx = (a + d) * (b + g) / ((a + b) * (g + d))
    assert y_factor("U", ShiftSet([a], [b], [g], [d])) == pytest.approx(approx, rel=1e-3)


def test_y_factor_denominator_pole_is_zero():
    assert y_factor("U", ShiftSet([0.1], [], [], [-0.1])) == 0.0


def test_theta_vs_lattice_p2_example():
    s = ShiftSet([0.1], [0.12], [0.15], [0.2])
    th = zeta_local_theta([2], s)[0]
    la = zeta_local_lattice([2], s)[0]
    assert abs(th - la) <= 1e-12 * abs(la)


@pytest.mark.parametrize("idx", range(len(GRID)))
def test_zeta_local_forms_agree(idx):
    s = GRID[idx]
    th = zeta_local_theta(PRIMES, s)
    la = zeta_local_lattice(PRIMES, s)
    assert np.all(np.abs(th - la) <= 1e-12 * np.abs(la))


@pytest.mark.parametrize("idx", range(len(SYM_GRID)))
def test_symmetric_local_forms_agree(idx):
    a, g = SYM_GRID[idx]
    assert np.allclose(quadratic_local_closed(PRIMES, a, g),
                       quadratic_local_direct(PRIMES, a, g), rtol=1e-12, atol=0)
    lam = LAM[PRIMES]
    assert np.allclose(elliptic_local_closed(PRIMES, a, g, lam),
                       elliptic_local_direct(PRIMES, a, g, lam), rtol=1e-12, atol=0)


def test_pure_moment_local_factor_is_one():
    s = ShiftSet([0.1], [0.2])
    p = primes_up_to(1000)
    assert np.allclose(zeta_prefactor(p, s) * zeta_local_lattice(p, s), 1.0, atol=1e-14)


@given(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
def test_matched_blocks_give_one(x, y):
    assert a_zeta(ShiftSet([x], [y], [x], [y])) == pytest.approx(1.0, abs=1e-12)
    assert a_quadratic([x], [x]) == pytest.approx(1.0, abs=1e-12)


def test_elliptic_matched_blocks():
    res = a_elliptic([0.1], [0.1], full=True)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert a_elliptic([0.1], [0.1], form="direct") == pytest.approx(res.value, rel=1e-10)


def test_elliptic_p11_branch_uses_degenerate_ratio():
    p = np.array([11.0])
    a, g = np.array([0.1]), np.array([0.2])
    lam = 1 / np.sqrt(11)
    x, u = 11 ** (-0.6), 11 ** (-0.7)
    f = lambda s: (1 - s * lam * u) / (1 - s * lam * x)
    bracket = (0.5 * f(1) + 0.5 * f(-1) + 1 / 11) / (1 + 1 / 11)
    assert elliptic_local_closed(p, a, g, [lam])[0] == pytest.approx(bracket, rel=1e-14)


def test_quadratic_p3_example():
    c = quadratic_local_closed([3], [0.1], [0.2])[0]
    d = quadratic_local_direct([3], [0.1], [0.2])[0]
    assert abs(c - d) <= 1e-12


def test_hecke_recursion_powers():
    tab = e11_coefficients(3 ** 8)
    lp = lambda_prime_powers([tab.lam[3]], [3], 8)[0]
    assert np.allclose(lp, [tab.lam[3 ** k] for k in range(9)], atol=1e-13)


def test_local_factors_tend_to_one():
    p = primes_up_to(20_000)
    p = p[p > 100]
    s = ShiftSet([0.1], [0.12], [0.15], [0.2])
    dz = np.abs(zeta_prefactor(p, s) * zeta_local_lattice(p, s) - 1)
    assert np.all(np.diff(dz) < 0)
    assert np.max(dz * p ** 2.0) < 1.0
    a, g = np.array([0.1, 0.2]), np.array([0.1, 0.15])
    pre = 1 / np.prod([1 - p ** (-1.0 - x) for x in (0.2, 0.25, 0.3, 0.35)], axis=0)
    dks = np.abs(pre * ks_local_closed(p, a, g) - 1)
    assert np.all(np.diff(dks) < 0)


def test_elliptic_local_decay():
    p = primes_up_to(20_000)
    p = p[p > 100]
    a = np.array([0.1])
    matched = _symmetric_prefactor(p, a, a, True, True, True) * elliptic_local_closed(p, a, a, LAM[p])
    assert np.max(np.abs(matched - 1) * p ** 2.0) < 1.0
    # unmatched shifts: the (lambda^2 - 1) p^(-1-2 alpha) term survives
    g = np.array([0.15])
    lf = _symmetric_prefactor(p, a, g, True, True, True) * elliptic_local_closed(p, a, g, LAM[p])
    assert np.max(np.abs(lf - 1) * p ** 1.2) < 3.0
    assert np.max(np.abs(lf - 1) * p ** 2.0) > 100.0


@given(st.permutations([0.1, 0.25, -0.15]), st.permutations([0.2, 0.3]))
def test_a_factors_block_symmetric(alpha, gamma):
    base_z = a_zeta(ShiftSet([0.1, 0.25, -0.15], [0.1], [0.2, 0.3], [0.2]))
    assert a_zeta(ShiftSet(alpha, [0.1], gamma, [0.2])) == pytest.approx(base_z, rel=1e-12)
    base_d = a_quadratic([0.1, 0.25, -0.15], [0.2, 0.3])
    assert a_quadratic(alpha, gamma) == pytest.approx(base_d, rel=1e-12)


def test_truncation_certificate():
    s = ShiftSet([0.1], [0.12], [0.15], [0.2])
    res = a_zeta(s, EulerConfig(prime_cutoff=5000), full=True)
    full = a_zeta(s, EulerConfig(prime_cutoff=10_000))
    assert abs(full - res.value) <= 2 * res.tail
    with pytest.raises(TailNotConverged):
        a_zeta(s, EulerConfig(tail_tol=1e-12))


def test_disk_enforced():
    with pytest.raises(InvalidInput):
        a_zeta(ShiftSet([0.5], [0.1]))


def test_ks_b_forms():
    assert ks_b([0.1], [0.1]) == pytest.approx(ks_b([0.1], [0.1], form="lattice"), rel=1e-10)
    a, d = [0.1, 0.2], [0.15, 0.05]
    assert ks_b(a, d) == pytest.approx(ks_b(a, d, form="lattice"), rel=1e-10)
    assert np.allclose(ks_local_closed([2, 3], a, d), ks_local_lattice([2, 3], a, d), rtol=1e-12)
    assert ks_b(a, d) == pytest.approx(a_zeta(ShiftSet(a, [], [], d)), rel=1e-12)


def test_ks_b_vanishes_at_zero_for_k2():
    # the p = 3 local sum (1 - 1/p)(1 - 3/p) is zero
    assert ks_local_closed([3], [0.0, 0.0], [0.0, 0.0])[0] == pytest.approx(0.0, abs=1e-15)


def test_logderiv_c_forms():
    for r in (0.05, 0.1, 0.2):
        c = logderiv_c(r)
        assert abs(c.imag) < 1e-10
        assert c == pytest.approx(logderiv_c_closed(r), rel=1e-12)


def test_logderiv_c_matches_finite_difference():
    # c(r) = d/da d/db log A_zeta(a, b; g, d) at a = b = g = d = r
    r, h = 0.1, 1e-4

    def logA(a, b):
        return np.log(a_zeta(ShiftSet([a], [b], [r], [r])))

    fd = (logA(r + h, r + h) - logA(r + h, r - h) - logA(r - h, r + h) + logA(r - h, r - h)) / (4 * h * h)
    assert fd == pytest.approx(logderiv_c(r), rel=1e-5)


def test_prime_log_square_sum_growth():
    r = 0.01
    assert prime_log_square_sum(r).real == pytest.approx(1 / (4 * r * r), rel=0.10)


def test_discrete_sum_pieces():
    a, c, h = 0.05, 0.1, 1e-5
    fd = (a_zeta(ShiftSet([a], [h], [c], [0])) - a_zeta(ShiftSet([a], [-h], [c], [0]))) / (2 * h)
    assert discrete_prime_sum(a, c) == pytest.approx(fd, rel=1e-7)
    assert discrete_prime_sum(c, c) == 0.0
    assert discrete_swap_product(a, c) == pytest.approx(a_zeta(ShiftSet([0], [-a], [c], [0])), rel=1e-12)
