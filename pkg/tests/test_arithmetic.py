import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratiolab.arithmetic import (
    E11_CONDUCTOR, character_table, e11_ap_point_count, e11_coefficients, factorize,
    fundamental_discriminants, harmonic_detector, hecke_defect,
    is_fundamental_discriminant, kronecker, kronecker_chi, load_coefficient_table,
    moebius, prime_discriminant_factors, prime_table, primes_up_to,
    save_coefficient_table, twist_sign)
from ratiolab.errors import BadTwist, InvalidInput, NotFundamental


def test_primes_small():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_prime_table_certified_and_counts():
    # pi(10^4) = 1229, pi(10^5) = 9592
    assert prime_table(10_000).primes.size == 1229
    assert prime_table(100_000).primes.size == 9592


def test_moebius_values():
    assert [moebius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    with pytest.raises(InvalidInput):
        moebius(0)


@given(st.integers(1, 10_000))
def test_moebius_sum_over_divisors(n):
    total = sum(moebius(k) for k in range(1, n + 1) if n % k == 0)
    assert total == (1 if n == 1 else 0)


def test_fundamental_discriminant_sequences():
    assert fundamental_discriminants(13, 1).tolist() == [1, 5, 8, 12, 13]
    assert fundamental_discriminants(8, -1).tolist() == [-3, -4, -7, -8]


def test_fundamental_discriminant_counts_match_filter():
    X = 10_000
    for sign in (1, -1):
        brute = [d for d in range(1, X + 1) if is_fundamental_discriminant(sign * d)]
        assert fundamental_discriminants(X, sign).size == len(brute)
    assert fundamental_discriminants(X, 1).size == 3044
    assert fundamental_discriminants(X, -1).size == 3043


@given(st.integers(-3000, 3000).filter(is_fundamental_discriminant))
def test_character_table_matches_kronecker(d):
    q = abs(d)
    tab = character_table(d)
    assert all(tab[a] == kronecker(d, a) for a in range(q))
    assert math.prod(prime_discriminant_factors(d)) == d


@given(st.integers(-2000, 2000).filter(is_fundamental_discriminant),
       st.integers(1, 500), st.integers(1, 500))
def test_kronecker_completely_multiplicative(d, m, n):
    assert kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n)


def test_kronecker_chi_rejects_non_fundamental():
    assert kronecker_chi(5, 2) == -1
    with pytest.raises(NotFundamental):
        kronecker_chi(9, 2)


def test_harmonic_detector_values():
    assert harmonic_detector(4) == pytest.approx(2 / 3)
    assert harmonic_detector(2) == 0.0
    assert harmonic_detector(1) == 1.0
    assert harmonic_detector(36) == pytest.approx(1 / (1.5 * 4 / 3))


@pytest.mark.parametrize("n", [4, 9])
def test_harmonic_detector_matches_family_average(n):
    discs = fundamental_discriminants(100_000, 1)
    avg = np.mean([kronecker(int(d), n) for d in discs])
    assert abs(avg - harmonic_detector(n)) <= 0.02 * harmonic_detector(n)


def test_e11_first_coefficients():
    tab = e11_coefficients(20)
    assert tab.a[1:12].tolist() == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1]
    assert tab.lam[11] == pytest.approx(1 / math.sqrt(11))


def test_e11_point_counts_below_1000():
    tab = e11_coefficients(1000)
    for p in primes_up_to(999):
        assert tab.a[p] == e11_ap_point_count(p)


def test_e11_hecke_relations_exact():
    tab = e11_coefficients(200 * 200)
    assert max(hecke_defect(tab, m, n) for m in range(1, 201) for n in range(m, 201)) == 0


def test_e11_mu_is_dirichlet_inverse():
    tab = e11_coefficients(600)
    for n in range(1, 601):
        conv = sum(tab.lam[k] * tab.mu[n // k] for k in range(1, n + 1) if n % k == 0)
        assert conv == pytest.approx(1.0 if n == 1 else 0.0, abs=1e-12)
    assert tab.mu[E11_CONDUCTOR ** 2] == 0.0


def test_coefficient_table_roundtrip(tmp_path):
    tab = e11_coefficients(500)
    path = tmp_path / "e11.bin"
    save_coefficient_table(tab, path)
    back = load_coefficient_table(path)
    assert back.checksum() == tab.checksum()
    assert np.array_equal(back.a, tab.a)


def test_twist_sign():
    # chi_d(-11) = sign(d) (d/11)
    for d in (5, 8, 12, 13, -3, -4, -7, -8):
        assert twist_sign(d) == (1 if d > 0 else -1) * kronecker(d, 11)
    with pytest.raises(BadTwist):
        twist_sign(-11)
    with pytest.raises(NotFundamental):
        twist_sign(9)


@given(st.integers(2, 10 ** 6))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p ** e for p, e in f.items()) == n
