"""Numerical left-hand sides: the actual L-function averages.

t-integrals use composite Gauss-Legendre panels whose width is halved once
as a self-certificate. Family sums run over every enumerated fundamental
discriminant; denominators that nearly vanish are excluded and reported.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .arithmetic import (E11_CONDUCTOR, character_table, e11_coefficients,
                         fundamental_discriminants, is_fundamental_discriminant,
                         kronecker)
from .conjectures import elliptic_discriminants
from .errors import (CutoffNotCertified, InvalidInput, MissingCoefficients,
                     NearZeroDenominator, NotFundamental, QuadratureNotConverged)
from .special import hurwitz_zeta, incomplete_gamma_upper, zeta, zeta_vertical, zeta_zeros_up_to

__all__ = [
    "LhsResult", "composite_gauss", "lhs_zeta_ratio_integral", "l_function",
    "l_function_afe", "lhs_quadratic_family_sum", "l_elliptic_twist",
    "lhs_elliptic_family_sum", "lhs_log_deriv_integral", "lhs_discrete_moment",
]

_ZERO_GUARD = 1e-8
_GAUSS_ORDER = 8
_AFE_LENGTH = 40.0


@dataclass(frozen=True)
class LhsResult:
    """A numerical average with its self-certified error and exclusions."""

    value: complex
    error: float
    count: int
    excluded: list = field(default_factory=list)

    def __complex__(self):
        return complex(self.value)


def composite_gauss(f, t0, T, step, tol=1e-4):
    """Integral of ``f`` over [t0, T] with Gauss panels of about ``step`` per node.

    Returns (value, change) where ``change`` compares against panels of
    twice the width. Raises ``QuadratureNotConverged`` when the relative
    change exceeds ``tol``.
    """
    x, w = np.polynomial.legendre.leggauss(_GAUSS_ORDER)
    n_coarse = max(1, math.ceil((T - t0) / (_GAUSS_ORDER * step)))

    def level(n):
        edges = np.linspace(t0, T, n + 1)
        half = 0.5 * (edges[1] - edges[0])
        mid = 0.5 * (edges[:-1] + edges[1:])
        t = (mid[:, None] + half * x[None, :]).ravel()
        return complex(half * np.sum(np.tile(w, n) * f(t)))

    coarse = level(n_coarse)
    fine = level(2 * n_coarse)
    change = abs(fine - coarse)
    if change > tol * max(abs(fine), 1e-300):
        raise QuadratureNotConverged(f"step halving changed the integral by {change:.3e}")
    return fine, change


# zeta on the critical line -------------------------------------------------

def _check_denominators(vals, t, what):
    if vals.size and np.abs(vals).min() < _ZERO_GUARD:
        i = np.unravel_index(np.argmin(np.abs(vals)), vals.shape)[0]
        raise NearZeroDenominator(f"|{what}| < 1e-8 at t = {t[i]:.6f}")


def lhs_zeta_ratio_integral(shifts, T, step=0.1, t0=1.0, full=False):
    """Integral over [t0, T] of the zeta-ratio at s = 1/2 + it.

    Numerator prod zeta(s + alpha) prod zeta(1 - s + beta), denominator
    prod zeta(s + gamma) prod zeta(1 - s + delta).
    """
    if step > 0.1:
        raise InvalidInput("step must be <= 0.1")
    if T > 1e4:
        raise InvalidInput("T must be <= 1e4")
    a, b, g, d = shifts.arrays()
    if np.any(g.real <= 0) or np.any(d.real <= 0):
        raise InvalidInput("denominator shifts need positive real part")
    plus = np.concatenate([a, g])
    minus = np.concatenate([b, d])
    K, L = a.size, b.size

    def integrand(t):
        zp, zm = zeta_vertical(t, plus, minus)
        _check_denominators(zp[:, K:], t, "zeta(s + gamma)")
        _check_denominators(zm[:, L:], t, "zeta(1 - s + delta)")
        num = zp[:, :K].prod(axis=1) * zm[:, :L].prod(axis=1)
        return num / (zp[:, K:].prod(axis=1) * zm[:, L:].prod(axis=1))

    value, err = composite_gauss(integrand, t0, T, step)
    res = LhsResult(value, err, 0)
    return res if full else res.value


def lhs_log_deriv_integral(r, T, step=0.1, t0=1.0, full=False):
    """Window average over [t0, T] of |zeta'/zeta(1/2 + r + it)|^2."""
    if step > 0.1:
        raise InvalidInput("step must be <= 0.1")
    if T > 1e4:
        raise InvalidInput("T must be <= 1e4")
    if r.real * math.log(T) < 2 - 1e-9:
        raise InvalidInput("Re r must be >= 2 / log T")

    def integrand(t):
        z, _ = zeta_vertical(t, [r])
        dz, _ = zeta_vertical(t, [r], deriv=1)
        _check_denominators(z, t, "zeta(1/2 + r + it)")
        return np.abs(dz[:, 0] / z[:, 0]) ** 2

    value, err = composite_gauss(integrand, t0, T, step)
    res = LhsResult(value.real / (T - t0), err / (T - t0), 0)
    return res if full else res.value


def lhs_discrete_moment(a, c, T, full=False):
    """Sum over zeros 0 < gamma <= T of zeta(rho + a) / zeta(rho + c)."""
    if T > 2e3:
        raise InvalidInput("T must be <= 2000")
    gam = np.asarray(zeta_zeros_up_to(T))
    if a == c:
        res = LhsResult(complex(gam.size), 0.0, int(gam.size))
        return res if full else res.value
    rho = 0.5 + 1j * gam
    den = zeta(rho + c)
    bad = np.abs(den) < _ZERO_GUARD
    if bad.any():
        raise NearZeroDenominator(f"zeta(rho + c) tiny at gamma = {gam[bad][0]:.6f}")
    value = complex(np.sum(zeta(rho + a) / den))
    res = LhsResult(value, 0.0, int(gam.size))
    return res if full else res.value


# quadratic Dirichlet L-functions ------------------------------------------------

def l_function(d, s):
    """L(s, chi_d) = |d|^-s sum_a chi_d(a) zeta(s, a/|d|)."""
    d = int(d)
    if not is_fundamental_discriminant(d) and d != 1:
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_flat = s_arr.ravel()
    if d == 1:
        out = np.asarray(zeta(s_flat))
    else:
        q = abs(d)
        chi = character_table(d)
        res = np.flatnonzero(chi)
        hz = hurwitz_zeta(s_flat[:, None], (res / q)[None, :])
        out = np.exp(-s_flat * math.log(q)) * (hz @ chi[res].astype(float))
    return complex(out[0]) if scalar else out.reshape(s_arr.shape)


def l_function_afe(d, s):
    """L(s, chi_d) from the theta-function approximate functional equation."""
    d = int(d)
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    q = abs(d)
    par = 0 if d > 0 else 1
    s = complex(s)
    n_max = int(math.ceil(math.sqrt(45.0 * q / math.pi))) + 2
    n = np.arange(1, n_max + 1)
    chi = np.array([kronecker(d, int(k)) for k in n], dtype=float)
    x = np.pi * n ** 2 / q
    a1 = 0.5 * (s + par)
    a2 = 0.5 * (1 - s + par)
    g1 = incomplete_gamma_upper(np.full(n.size, a1), x)
    g2 = incomplete_gamma_upper(np.full(n.size, a2), x)
    lq = math.log(q / math.pi)
    lam = np.sum(chi * (np.exp(a1 * lq - s * np.log(n)) * g1
                        + np.exp(a2 * lq - (1 - s) * np.log(n)) * g2))
    return complex(lam / np.exp(a1 * lq + loggamma(a1)))


def lhs_quadratic_family_sum(shifts, X, sign="positive", full=False):
    """Sum over fundamental d of prod L(1/2 + alpha, chi_d) / prod L(1/2 + gamma, chi_d).

    Discriminants with a denominator below 1e-8 in modulus are excluded
    and listed in the result.
    """
    a, b, g, d = shifts.arrays()
    if b.size or d.size:
        raise InvalidInput("quadratic family takes alpha and gamma blocks only")
    if X > 1e5:
        raise InvalidInput("X must be <= 1e5")
    if sign not in ("positive", "negative"):
        raise InvalidInput("sign must be 'positive' or 'negative'")
    discs = fundamental_discriminants(X, 1 if sign == "positive" else -1)
    pts = 0.5 + np.concatenate([a, g])
    K = a.size
    total = 0j
    excluded = []
    for disc in discs:
        vals = l_function(int(disc), pts)
        den = vals[K:]
        if den.size and np.abs(den).min() < _ZERO_GUARD:
            excluded.append(int(disc))
            continue
        total += np.prod(vals[:K]) / np.prod(den)
    if len(excluded) > 1e-3 * discs.size:
        raise NearZeroDenominator(f"{len(excluded)} discriminants excluded: {excluded[:10]}")
    res = LhsResult(complex(total), 0.0, int(discs.size), excluded)
    return res if full else res.value


# twists of E11 ----------------------------------------------------------------------

def _afe_terms(c, n, Q, s, w, A):
    logr = np.log(Q / n)
    g1 = incomplete_gamma_upper(np.full(n.size, s + 0.5, dtype=complex), n / (Q * A))
    g2 = incomplete_gamma_upper(np.full(n.size, 1.5 - s, dtype=complex), n * A / Q)
    return np.sum(c * (np.exp(s * logr) * g1 + w * np.exp((1 - s) * logr) * g2))


def l_elliptic_twist(d, s, table=None, length=_AFE_LENGTH, split=1.0, full=False):
    """L(s, E11 x chi_d) in the analytic normalisation (centre s = 1/2).

    Uses Lambda(s) = Q^s Gamma(s + 1/2) L(s), Q = sqrt(11) |d| / (2 pi), and
    the smoothed expansion with free split parameter ``split``; the series
    is cut at ``length * Q * max(split, 1/split)`` and the omitted tail is
    bounded analytically.
    """
    d = int(d)
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    if d % E11_CONDUCTOR == 0:
        raise InvalidInput("twist must be coprime to 11")
    s = complex(s)
    w = kronecker(d, -E11_CONDUCTOR)
    Q = math.sqrt(E11_CONDUCTOR) * abs(d) / (2 * math.pi)
    M = int(math.ceil(length * Q * max(split, 1.0 / split)))
    if table is None:
        table = e11_coefficients(max(M, 1000))
    if table.max_index < M:
        raise MissingCoefficients(f"need coefficients to {M}, have {table.max_index}")
    n = np.arange(1, M + 1)
    chi = character_table(d) if abs(d) > 1 else np.ones(1, dtype=np.int64)
    c = table.lam[1:M + 1] * chi[n % abs(d)]
    lam = _afe_terms(c, n.astype(float), Q, s, w, split)
    norm = np.exp(s * math.log(Q) + loggamma(s + 0.5))
    value = complex(lam / norm)
    # tail bound: |c_n| <= d(n) <= 2 sqrt(n), Gamma(a, x) <= 2 x^(a-1) e^-x for x >= 2|a|
    sig = s.real
    bound = 0.0
    for a_re, x_scale, pw in ((sig + 0.5, 1.0 / (Q * split), sig), (1.5 - sig, split / Q, 1 - sig)):
        x = M * x_scale
        if x < 2 * abs(a_re) + 2:
            raise CutoffNotCertified("series too short for the remainder bound")
        first = 2 * math.sqrt(M) * (Q / M) ** pw * 2 * x ** (a_re - 1) * math.exp(-x)
        bound += first / (1 - math.exp(-x_scale)) * 2
    bound /= abs(norm)
    if bound > 1e-10 * max(abs(value), 1e-3):
        raise CutoffNotCertified(f"remainder bound {bound:.3e} too large")
    if full:
        return value, bound, w
    return value


def lhs_elliptic_family_sum(shifts, X, parity="even", table=None, full=False):
    """Sum over twists with root number +1 (even) or -1 (odd) of the L-ratio."""
    a, b, g, d = shifts.arrays()
    if b.size or d.size:
        raise InvalidInput("elliptic family takes alpha and gamma blocks only")
    if X > 5e3:
        raise InvalidInput("X must be <= 5000")
    if parity == "odd" and g.size:
        raise InvalidInput("odd twists vanish at the centre; no denominators allowed")
    discs = elliptic_discriminants(X, parity)
    M = int(math.ceil(_AFE_LENGTH * math.sqrt(E11_CONDUCTOR) * X / (2 * math.pi)))
    if table is None:
        table = e11_coefficients(M)
    pts = 0.5 + np.concatenate([a, g])
    K = a.size
    total = 0j
    excluded = []
    for disc in discs:
        vals = np.array([l_elliptic_twist(int(disc), p, table) for p in pts])
        den = vals[K:]
        if den.size and np.abs(den).min() < _ZERO_GUARD:
            excluded.append(int(disc))
            continue
        total += np.prod(vals[:K]) / np.prod(den)
    if len(excluded) > 1e-3 * max(discs.size, 1):
        raise NearZeroDenominator(f"{len(excluded)} twists excluded: {excluded[:10]}")
    res = LhsResult(complex(total), 0.0, int(discs.size), excluded)
    return res if full else res.value
