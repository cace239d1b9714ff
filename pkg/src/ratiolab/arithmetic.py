"""Arithmetic helpers: primes, Moebius, quadratic characters, the E11 form.

Quadratic characters are evaluated two ways: scalar values by the Kronecker
symbol algorithm and whole residue tables by multiplying the characters of
the prime discriminants dividing ``d``. The tests cross-check both.
"""

import hashlib
import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BadTwist, CoefficientOverflow, InvalidInput, NotFundamental

__all__ = [
    "primes_up_to", "PrimeTable", "prime_table", "moebius", "factorize",
    "is_fundamental_discriminant", "kronecker", "character_table",
    "prime_discriminant_factors", "fundamental_discriminants",
    "harmonic_detector", "kronecker_chi", "CoefficientTable", "e11_coefficients",
    "e11_ap_point_count", "twist_sign", "hecke_defect",
    "save_coefficient_table", "load_coefficient_table",
]

E11_CONDUCTOR = 11


# primes -------------------------------------------------------------------

def primes_up_to(P):
    """All primes ``p <= P`` by the sieve of Eratosthenes."""
    P = int(P)
    if P < 2:
        return np.empty(0, dtype=np.int64)
    mark = np.ones(P + 1, dtype=bool)
    mark[:2] = False
    for q in range(2, math.isqrt(P) + 1):
        if mark[q]:
            mark[q * q::q] = False
    return np.nonzero(mark)[0].astype(np.int64)


def _sundaram(P):
    # independent sieve used only to certify the Eratosthenes table
    if P < 2:
        return np.empty(0, dtype=np.int64)
    k = (P - 1) // 2
    keep = np.ones(k + 1, dtype=bool)
    keep[0] = False
    for i in range(1, k + 1):
        step = 2 * i + 1
        first = i + i * step
        if first > k:
            break
        keep[first::step] = False
    odd = 2 * np.nonzero(keep)[0] + 1
    return np.concatenate([[2], odd]).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to ``cutoff``; certified against an independent sieve."""

    cutoff: int
    primes: np.ndarray = field(repr=False)

    @property
    def count(self):
        return int(self.primes.size)


@lru_cache(maxsize=16)
def prime_table(cutoff, verify=True):
    """Build (and by default certify) the prime table up to ``cutoff``."""
    p = primes_up_to(cutoff)
    if verify and not np.array_equal(p, _sundaram(int(cutoff))):
        raise AssertionError("prime sieves disagree")
    p.setflags(write=False)
    return PrimeTable(int(cutoff), p)


def factorize(n):
    """Prime factorisation of ``|n|`` as a dict {p: exponent}."""
    n = abs(int(n))
    if n == 0:
        raise InvalidInput("cannot factorise 0")
    out = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def moebius(n):
    """Moebius function mu(n) for n >= 1."""
    if n < 1:
        raise InvalidInput("mu(n) needs n >= 1")
    f = factorize(n) if n > 1 else {}
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def is_fundamental_discriminant(d):
    """True when ``d`` is a fundamental discriminant (1 counts)."""
    d = int(d)
    if d == 0:
        return False
    if d == 1:
        return True
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(n):
    return all(e == 1 for e in factorize(n).values()) if n > 1 else True


# quadratic characters -----------------------------------------------------

def _jacobi(a, n):
    # Jacobi symbol (a/n) for odd positive n
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d, n):
    """Kronecker symbol (d/n) for integers d, n."""
    d = int(d)
    n = int(n)
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    return result * _jacobi(d, n)


def prime_discriminant_factors(d):
    """Split a fundamental discriminant into prime discriminants.

    Returns the list of factors drawn from {-4, 8, -8, p*} whose product
    is ``d``, with p* = (-1)^((p-1)/2) p.
    """
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    if d == 1:
        return []
    odd = [p for p in factorize(d) if p != 2]
    factors = [p if p % 4 == 1 else -p for p in odd]
    rest = d
    for f in factors:
        rest //= f
    if rest != 1:
        if rest not in (-4, 8, -8):
            raise NotFundamental(f"unexpected 2-part {rest} of {d}")
        factors.append(rest)
    return factors


def _prime_disc_table(f, modulus):
    a = np.arange(modulus)
    if f == -4:
        base = np.array([0, 1, 0, -1])
        return base[a % 4]
    if f == 8:
        base = np.array([0, 1, 0, -1, 0, -1, 0, 1])
        return base[a % 8]
    if f == -8:
        base = np.array([0, 1, 0, 1, 0, -1, 0, -1])
        return base[a % 8]
    p = abs(f)
    leg = -np.ones(p, dtype=np.int64)
    leg[(np.arange(1, p) ** 2) % p] = 1
    leg[0] = 0
    return leg[a % p]


def character_table(d):
    """Values chi_d(a) for a = 0 .. |d|-1 of the primitive character mod |d|."""
    q = abs(int(d))
    out = np.ones(q, dtype=np.int64)
    for f in prime_discriminant_factors(d):
        out *= _prime_disc_table(f, q)
    if q == 1:
        out[:] = 1
    return out


def fundamental_discriminants(X, sign=1):
    """Fundamental discriminants d with 0 < sign * d <= X, sorted by |d|."""
    X = int(X)
    if sign not in (1, -1):
        raise InvalidInput("sign must be +1 or -1")
    sqf = np.ones(X + 1, dtype=bool)
    sqf[0] = False
    for p in primes_up_to(math.isqrt(X)):
        sqf[p * p::p * p] = False
    D = np.arange(X + 1)
    # odd part: sign*D = 1 mod 4 and squarefree
    odd = sqf & (((sign * D) % 4) == 1)
    # even part: D = 4m with sign*m = 2, 3 mod 4, m squarefree
    m = np.arange(X // 4 + 1)
    even_m = sqf[m] & np.isin((sign * m) % 4, (2, 3))
    even = np.zeros(X + 1, dtype=bool)
    even[4 * m[even_m]] = True
    vals = np.nonzero(odd | even)[0]
    return sign * vals.astype(np.int64)


def harmonic_detector(n):
    """Family average of chi_d(n): prod_{p | n} (1 + 1/p)^-1 on squares, else 0."""
    n = int(n)
    if n < 1:
        raise InvalidInput("n must be >= 1")
    r = math.isqrt(n)
    if r * r != n:
        return 0.0
    out = 1.0
    for p in factorize(n):
        out /= 1.0 + 1.0 / p
    return out


def kronecker_chi(d, n):
    """chi_d(n) for a fundamental discriminant ``d``."""
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    return kronecker(d, n)


# the weight-two form of conductor 11 ----------------------------------------

def _euler_function_series(n_terms, step=1):
    """Sparse pentagonal expansion of prod_{n>=1} (1 - q^(step n))."""
    idx, val = [0], [1]
    k = 1
    while True:
        e1 = step * k * (3 * k - 1) // 2
        if e1 >= n_terms:
            break
        s = -1 if k % 2 else 1
        idx.append(e1)
        val.append(s)
        e2 = step * k * (3 * k + 1) // 2
        if e2 < n_terms:
            idx.append(e2)
            val.append(s)
        k += 1
    return np.array(idx), np.array(val, dtype=np.int64)


def _sparse_mul(dense, idx, val):
    out = np.zeros_like(dense)
    n = dense.size
    for i, v in zip(idx, val):
        out[i:] += v * dense[:n - i]
    return out


@dataclass(frozen=True)
class CoefficientTable:
    """Dirichlet coefficients of the E11 newform.

    ``a[n]`` are the integer Fourier coefficients, ``lam[n] = a[n]/sqrt(n)``
    and ``mu[n]`` the coefficients of the reciprocal L-function. Index 0
    is unused.
    """

    max_index: int
    a: np.ndarray = field(repr=False)
    lam: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)

    def checksum(self):
        return hashlib.sha256(self.a.tobytes()).hexdigest()


def _mu_table(lam, max_index):
    mu = np.ones(max_index + 1)
    mu[0] = 0.0
    root = math.isqrt(max_index)
    for p in primes_up_to(max_index):
        lp = lam[p]
        if p > root:
            mu[p::p] *= -lp
            continue
        idx = np.arange(p, max_index + 1, p)
        e = np.ones(idx.size, dtype=np.int64)
        rest = idx // p
        while True:
            div = rest % p == 0
            if not div.any():
                break
            e[div] += 1
            rest[div] //= p
        principal = 0.0 if p == E11_CONDUCTOR else 1.0
        fac = np.where(e == 1, -lp, np.where(e == 2, principal, 0.0))
        mu[idx] *= fac
    return mu


@lru_cache(maxsize=4)
def e11_coefficients(max_index):
    """Coefficients of q prod (1 - q^n)^2 (1 - q^(11n))^2 up to ``max_index``."""
    max_index = int(max_index)
    if max_index < 1:
        raise InvalidInput("max_index must be >= 1")
    n = max_index  # coefficients of the product for exponents 0 .. n-1
    series = np.zeros(n, dtype=np.int64)
    series[0] = 1
    i1, v1 = _euler_function_series(n, 1)
    i11, v11 = _euler_function_series(n, 11)
    for idx, val in ((i1, v1), (i1, v1), (i11, v11), (i11, v11)):
        series = _sparse_mul(series, idx, val)
        if np.abs(series).max() > 2 ** 62:
            raise CoefficientOverflow("eta product left int64 range")
    a = np.zeros(max_index + 1, dtype=np.int64)
    a[1:] = series
    # Hasse bound as a guard against silent wrap-around
    p = primes_up_to(max_index)
    if np.any(np.abs(a[p]) > 2 * np.sqrt(p) + 1e-9):
        raise CoefficientOverflow("Hasse bound violated")
    lam = np.zeros(max_index + 1)
    lam[1:] = a[1:] / np.sqrt(np.arange(1, max_index + 1))
    mu = _mu_table(lam, max_index)
    for arr in (a, lam, mu):
        arr.setflags(write=False)
    return CoefficientTable(max_index, a, lam, mu)


def e11_ap_point_count(p):
    """a_p = p + 1 - #E(F_p) on the minimal model y^2 + y = x^3 - x^2 - 10x - 20.

    For odd p this equals counting on y^2 = 4x^3 - 4x^2 - 40x - 79; the
    minimal model is needed at p = 2 where that form degenerates.
    """
    p = int(p)
    x = np.arange(p)
    if p == 2:
        rhs = (x ** 3 - x ** 2 - 10 * x - 20) % 2
        count = sum(int(np.sum((y * y + y) % 2 == rhs)) for y in range(2))
        return p - count
    f = (4 * x ** 3 - 4 * x ** 2 - 40 * x - 79) % p
    sq = np.zeros(p, dtype=np.int64)
    np.add.at(sq, (x * x) % p, 1)
    count = int(sq[f].sum())
    return p - count


def twist_sign(d):
    """Root number of the twist of E11 by chi_d (requires gcd(d, 11) = 1).

    Equals chi_d(-11) = sign(d) * (d / 11).
    """
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    if d % E11_CONDUCTOR == 0:
        raise BadTwist("twist must be coprime to 11")
    return kronecker(d, -E11_CONDUCTOR)


def hecke_defect(table, m, n):
    """|a(m) a(n) - sum_{e | gcd(m,n), 11 not| e} e a(mn/e^2)|."""
    g = math.gcd(m, n)
    total = 0
    for e in range(1, g + 1):
        if g % e == 0 and e % E11_CONDUCTOR:
            total += e * int(table.a[m * n // (e * e)])
    return abs(int(table.a[m]) * int(table.a[n]) - total)


# binary cache -------------------------------------------------------------

_MAGIC = b"E11COEF1"
_HEADER = struct.Struct("<8sQ32s")


def save_coefficient_table(table, path):
    """Write the integer coefficients with a versioned, checksummed header."""
    digest = hashlib.sha256(table.a.tobytes()).digest()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, table.max_index, digest))
        fh.write(np.ascontiguousarray(table.a, dtype="<i8").tobytes())


def load_coefficient_table(path):
    """Read a cache written by ``save_coefficient_table`` and validate it."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        body = fh.read()
    if len(head) != _HEADER.size:
        raise InvalidInput("truncated coefficient cache")
    magic, max_index, digest = _HEADER.unpack(head)
    if magic != _MAGIC:
        raise InvalidInput("bad magic in coefficient cache")
    a = np.frombuffer(body, dtype="<i8").astype(np.int64)
    if a.size != max_index + 1 or hashlib.sha256(a.tobytes()).digest() != digest:
        raise InvalidInput("coefficient cache failed its checksum")
    lam = np.zeros(max_index + 1)
    lam[1:] = a[1:] / np.sqrt(np.arange(1, max_index + 1))
    mu = _mu_table(lam, max_index)
    for arr in (a, lam, mu):
        arr.setflags(write=False)
    return CoefficientTable(int(max_index), a, lam, mu)
