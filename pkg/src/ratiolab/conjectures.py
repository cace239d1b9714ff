"""Conjectured main terms assembled from Y-blocks, A-factors and gamma ratios.

Each routine returns a ``ConjectureValue`` whose ``error_budget`` combines
the Euler-product tail certificates with the change of the t-quadrature
under panel doubling.
"""

import math

import numpy as np

from .arithmetic import E11_CONDUCTOR, fundamental_discriminants, kronecker
from .errors import (CoincidentShifts, DegenerateShifts, InvalidInput,
                     QuadratureNotConverged, RTooSmall)
from .euler import (a_elliptic, a_quadratic, a_zeta, discrete_prime_sum,
                    discrete_swap_product, ks_b, logderiv_c, y_factor)
from .rmt.exact import sign_vectors, xi_permutations
from .shifts import ConjectureValue, EulerConfig, ShiftSet
from .special import g_factor, log_chi, zeta, zeta_logderiv_prime

__all__ = [
    "conj_zeta_rhs", "leading_order_ratio", "conj_quadratic_rhs", "conj_elliptic_rhs",
    "log_deriv_rhs", "discrete_moment_rhs", "ks_shifted_ratio_rhs",
    "richardson_limit", "elliptic_discriminants", "log_panels_integral",
]

_COINCIDENT = 1e-6
_GAUSS_ORDER = 16
_RICHARDSON = (1e-3, 5e-4, 2.5e-4)


def _guard(args):
    """Raise if a zeta(1 + x) numerator argument is at the pole x = 0."""
    args = np.asarray(args, dtype=complex).ravel()
    if args.size and np.abs(args).min() < _COINCIDENT:
        raise CoincidentShifts("substituted shifts put a zeta(1 + x) numerator at its pole")


def _pairs(v, w):
    return (np.asarray(v)[:, None] + np.asarray(w)[None, :]).ravel()


def _upper(v, strict):
    v = np.asarray(v)
    i, j = np.triu_indices(v.size, k=1 if strict else 0)
    return v[i] + v[j]


def _scaled_tail(res, weight):
    return abs(weight) * res.tail


# t-quadrature -------------------------------------------------------------------

def log_panels_integral(f, t0, T, panels=32, tol=1e-10, max_panels=4096):
    """Integral of ``f`` over [t0, T] on log-spaced Gauss-Legendre panels.

    ``f`` maps an array of t to values. Panels are doubled until two levels
    agree to ``tol`` relative. Returns (value, change).
    """
    x, w = np.polynomial.legendre.leggauss(_GAUSS_ORDER)
    lo, hi = math.log(t0), math.log(T)

    def level(n):
        edges = np.linspace(lo, hi, n + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        t = np.exp(u)
        weights = (half[:, None] * w[None, :]).ravel() * t
        return complex(np.sum(weights * f(t)))

    prev = level(panels)
    n = panels
    while 2 * n <= max_panels:
        n *= 2
        cur = level(n)
        change = abs(cur - prev)
        if change <= tol * max(abs(cur), 1e-300):
            return cur, change
        prev = cur
    raise QuadratureNotConverged(f"t-quadrature unconverged with {n} panels")


def _power_window(e, t0, T):
    """Integral of (t / 2 pi)^e over [t0, T]."""
    tp = 2 * np.pi
    if abs(e + 1) < 1e-14:
        return complex(tp * (math.log(T / tp) - math.log(t0 / tp)))
    return complex(tp / (e + 1) * ((T / tp) ** (e + 1) - (t0 / tp) ** (e + 1)))


# zeta ratios ----------------------------------------------------------------------

def _chi_ratio(t, a, ap):
    # prod_k chi(s + a_k) / chi(s + a'_k) on s = 1/2 + i t
    s = 0.5 + 1j * np.asarray(t)[:, None]
    return np.exp((log_chi(s + a[None, :]) - log_chi(s + ap[None, :])).sum(axis=1))


def conj_zeta_rhs(shifts, T, cfg=EulerConfig(), chi_mode="exactGamma", t0=1.0):
    """Main term for the integral over [t0, T] of the zeta-ratio.

    Sums over sigma in Xi_{K,L} of the chi-ratio integral times
    Y_U A_zeta at (a_sigma(1..K); -a_sigma(K+1..); gamma; delta),
    with a = (alpha, -beta).
    """
    a, b, g, d = shifts.arrays()
    if np.any(g.real <= 0) or np.any(d.real <= 0):
        raise InvalidInput("denominator shifts need positive real part")
    if chi_mode not in ("exactGamma", "tOver2piPower"):
        raise InvalidInput("chi_mode must be 'exactGamma' or 'tOver2piPower'")
    K, L = shifts.K, shifts.L
    comb = shifts.combined()
    total = 0j
    budget = 0.0
    terms = []
    for sigma in xi_permutations(K, L):
        ap = comb[list(sigma)]
        sub = ShiftSet(ap[:K], -ap[K:], g, d)
        _guard(np.concatenate([_pairs(ap[:K], -ap[K:]), _pairs(g, d)]))
        coef_y = y_factor("U", sub)
        res = a_zeta(sub, cfg, full=True)
        coef = coef_y * res.value
        if np.allclose(ap, comb, atol=0, rtol=0):
            integral, qerr = complex(T - t0), 0.0
        elif chi_mode == "tOver2piPower":
            integral, qerr = _power_window((ap[:K] - comb[:K]).sum(), t0, T), 0.0
        else:
            integral, qerr = log_panels_integral(
                lambda t: _chi_ratio(t, comb[:K], ap[:K]), t0, T)
        total += coef * integral
        budget += abs(coef) * qerr + _scaled_tail(res, coef_y * integral)
        terms.append({"sigma": list(sigma), "coefficient": coef, "integral": integral})
    return ConjectureValue(complex(total), float(budget),
                           {"terms": terms, "T": T, "t0": t0, "chi_mode": chi_mode})


def leading_order_ratio(alpha, beta, gamma, delta, T):
    """1 + (1 - T^(-a-b)) (a - g)(b - d) / ((a + b)(g + d))."""
    den = (alpha + beta) * (gamma + delta)
    if abs(alpha + beta) < 1e-12 or abs(gamma + delta) < 1e-12:
        raise DegenerateShifts("alpha + beta and gamma + delta must be nonzero")
    return complex(1 + (1 - T ** (-(alpha + beta))) * (alpha - gamma) * (beta - delta) / den)


def richardson_limit(fn, scales=_RICHARDSON):
    """Limit of ``fn(h)`` as h -> 0 from values at h, h/2, h/4.

    Cancels the O(h) and O(h^2) terms of an analytic dependence.
    """
    h = np.asarray(scales, dtype=float)
    if h.size != 3 or not np.allclose(h[1:] / h[:-1], 0.5):
        raise InvalidInput("Richardson scales must be h, h/2, h/4")
    f1, f2, f3 = (complex(fn(x)) for x in h)
    return (f1 - 6 * f2 + 8 * f3) / 3


# quadratic characters -----------------------------------------------------------

def conj_quadratic_rhs(shifts, X, sign="positive", cfg=EulerConfig()):
    """Main term for the sum over fundamental discriminants up to X.

    Each sign vector eps contributes sum_d (|d|/pi)^(sum(eps a - a)/2)
    times g(1/2 + a_k) for each flipped shift and Y_S A_D at eps * alpha.
    """
    a, b, g, d = shifts.arrays()
    if b.size or d.size:
        raise InvalidInput("quadratic family takes alpha and gamma blocks only")
    if np.any(a.real <= 0) or np.any(g.real <= 0):
        raise InvalidInput("shifts need positive real part")
    if sign not in ("positive", "negative"):
        raise InvalidInput("sign must be 'positive' or 'negative'")
    discs = fundamental_discriminants(X, 1 if sign == "positive" else -1)
    logd = np.log(np.abs(discs) / np.pi)
    variant = "plus" if sign == "positive" else "minus"
    total = 0j
    budget = 0.0
    terms = []
    for eps in sign_vectors(a.size):
        w = eps * a
        _guard(np.concatenate([_upper(w, False), _upper(g, True)]))
        flipped = a[eps < 0]
        gam = complex(np.prod(g_factor(variant, 0.5 + flipped))) if flipped.size else 1.0
        dsum = complex(np.exp(0.5 * (w - a).sum() * logd).sum())
        ys = y_factor("S", ShiftSet(w, (), g))
        res = a_quadratic(w, g, cfg, full=True)
        weight = gam * dsum * ys
        total += weight * res.value
        budget += _scaled_tail(res, weight)
        terms.append({"eps": eps.tolist(), "value": weight * res.value})
    return ConjectureValue(complex(total), float(budget),
                           {"terms": terms, "count": int(discs.size), "X": X})


# elliptic twists --------------------------------------------------------------------

def elliptic_discriminants(X, parity):
    """Fundamental d, |d| <= X, coprime to 11, with root number +1 (even) or -1."""
    if parity not in ("even", "odd"):
        raise InvalidInput("parity must be 'even' or 'odd'")
    want = 1 if parity == "even" else -1
    discs = np.concatenate([fundamental_discriminants(X, -1)[::-1],
                            fundamental_discriminants(X, 1)])
    keep = [int(x) for x in discs
            if x % E11_CONDUCTOR and kronecker(int(x), -E11_CONDUCTOR) == want]
    return np.array(keep, dtype=np.int64)


def conj_elliptic_rhs(shifts, X, parity="even", cfg=EulerConfig(), table=None):
    """Main term for the twists of E11 with the requested root number.

    Odd parity weights each sign vector by prod(eps).
    """
    a, b, g, d = shifts.arrays()
    if b.size or d.size:
        raise InvalidInput("elliptic family takes alpha and gamma blocks only")
    if np.any(a.real <= 0) or np.any(g.real <= 0):
        raise InvalidInput("shifts need positive real part")
    discs = elliptic_discriminants(X, parity)
    logc = np.log(E11_CONDUCTOR * discs.astype(float) ** 2 / (4 * np.pi ** 2))
    total = 0j
    budget = 0.0
    terms = []
    for eps in sign_vectors(a.size):
        w = eps * a
        _guard(np.concatenate([_upper(w, True), _upper(g, True), 2 * g]))
        flipped = a[eps < 0]
        gam = complex(np.prod(g_factor("elliptic", 0.5 + flipped))) if flipped.size else 1.0
        sgn = float(np.prod(eps)) if parity == "odd" else 1.0
        dsum = complex(np.exp(0.5 * (w - a).sum() * logc).sum())
        yo = y_factor("O", ShiftSet(w, (), g))
        res = a_elliptic(w, g, cfg, table=table, full=True)
        weight = sgn * gam * dsum * yo
        total += weight * res.value
        budget += _scaled_tail(res, weight)
        terms.append({"eps": eps.tolist(), "value": weight * res.value})
    return ConjectureValue(complex(total), float(budget),
                           {"terms": terms, "count": int(discs.size), "X": X,
                            "parity": parity})


# log-derivative ----------------------------------------------------------------------

def log_deriv_rhs(r, T, cfg=EulerConfig(), t0=1.0):
    """Window average over [t0, T] of |zeta'/zeta(1/2 + r + it)|^2 (main term)."""
    logT = math.log(T)
    if r.real < 1.0 / logT:
        raise RTooSmall(f"Re r = {r.real:.4g} is below 1/log T = {1 / logT:.4g}")
    if r.real >= 0.25 - 1e-3:
        raise InvalidInput("Re r must stay below 1/4")
    first = zeta_logderiv_prime(1 + 2 * r)
    res = a_zeta(ShiftSet([-r], [-r], [r], [r]), cfg, full=True)
    avg = _power_window(-2 * r, t0, T) / (T - t0)
    second_coef = zeta(1 - 2 * r) * zeta(1 + 2 * r)
    second = avg * second_coef * res.value
    c = logderiv_c(r, cfg, full=True)
    value = first + second + c.value
    budget = _scaled_tail(res, avg * second_coef) + c.tail
    return ConjectureValue(complex(value), float(budget),
                           {"logderiv_prime": first, "swap": second, "c": c.value})


# discrete moment --------------------------------------------------------------------

def discrete_moment_rhs(a, c, T, cfg=EulerConfig()):
    """Main term of the sum over zeros 0 < gamma <= T of zeta(rho + a)/zeta(rho + c)."""
    tp = T / (2 * np.pi)
    base = tp * (math.log(tp) - 1)
    if abs(a - c) < 1e-14:
        return ConjectureValue(complex(base), 0.0, {"main": base})
    la = zeta(1 + a, deriv=1) / zeta(1 + a)
    lc = zeta(1 + c, deriv=1) / zeta(1 + c)
    ps = discrete_prime_sum(a, c, cfg, full=True)
    sw = discrete_swap_product(a, c, cfg, full=True)
    swap_coef = (T * tp ** (-a) / (1 - a) / (2 * np.pi)
                 * zeta(1 - a) * zeta(1 + c) / zeta(1 + c - a))
    value = base + tp * (la - lc + ps.value) - swap_coef * sw.value
    budget = tp * ps.tail + _scaled_tail(sw, swap_coef)
    return ConjectureValue(complex(value), float(budget),
                           {"main": base, "prime_sum": ps.value, "swap": swap_coef * sw.value})


# shifted Keating-Snaith ratio -----------------------------------------------------

def ks_shifted_ratio_rhs(alphas, deltas, T=None, cfg=EulerConfig()):
    """B(alpha, delta) prod_{i,j} zeta(1 + alpha_i + delta_j)^-1.

    ``T`` is accepted for interface symmetry; the main term is t-independent.
    """
    a = np.asarray(alphas, dtype=complex).ravel()
    d = np.asarray(deltas, dtype=complex).ravel()
    if np.any(a.real <= 0) or np.any(d.real <= 0):
        raise InvalidInput("shifts need positive real part")
    res = ks_b(a, d, cfg, full=True)
    inv = 1.0 / np.prod(zeta(1.0 + _pairs(a, d)))
    return ConjectureValue(complex(res.value * inv), float(abs(inv) * res.tail),
                           {"B": res.value})
