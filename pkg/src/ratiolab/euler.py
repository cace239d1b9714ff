"""Arithmetic factors: Y-blocks of zeta values and certified Euler products.

Every local factor has two independent evaluations:

* ``A_zeta``: a trapezoid integral over the circle versus a lattice sum
  grouped by total degree (coefficients of two generating series);
* ``A_D`` and ``A_E``: the even-part closed form versus the direct
  even-degree sum of the generating series.

Products over primes are accumulated in log form; the value up to ``P/2``
is kept as a tail certificate.
"""

from dataclasses import dataclass

import numpy as np

from .arithmetic import E11_CONDUCTOR, e11_coefficients, prime_table
from .errors import InvalidInput, MissingCoefficients, TailNotConverged
from .shifts import EulerConfig, ShiftSet
from .special import zeta, zeta_logderiv_prime

__all__ = [
    "EulerProduct", "y_factor", "zeta_prefactor", "zeta_local_theta",
    "zeta_local_lattice", "a_zeta", "quadratic_local_closed",
    "quadratic_local_direct", "a_quadratic", "elliptic_local_closed",
    "elliptic_local_direct", "a_elliptic", "lambda_prime_powers",
    "ks_local_closed", "ks_local_lattice", "ks_b", "euler_product",
    "logderiv_c", "logderiv_c_closed", "prime_log_square_sum", "discrete_prime_sum",
    "discrete_swap_product",
]

_THETA_TOL = 1e-13
_SERIES_EPS = 1e-18


@dataclass(frozen=True)
class EulerProduct:
    """Truncated Euler product with a doubling-based tail estimate."""

    value: complex
    tail: float
    n_primes: int
    cutoff: int

    def __complex__(self):
        return complex(self.value)


# zeta blocks ----------------------------------------------------------------

def _zeta1(x):
    return np.array([zeta(1.0 + v) for v in np.ravel(x)], dtype=complex)


def _inv_zeta1(x):
    # 1 / zeta(1 + x), entire; series x - gamma x^2 at the pole
    x = np.ravel(np.asarray(x, dtype=complex))
    out = np.empty(x.size, dtype=complex)
    near = np.abs(x) < 1e-5
    out[near] = x[near] * (1.0 - np.euler_gamma * x[near])
    if np.any(~near):
        out[~near] = 1.0 / _zeta1(x[~near])
    return out


def _pair_sum(v, w):
    return (np.asarray(v)[:, None] + np.asarray(w)[None, :]).ravel()


def _upper(v, strict):
    v = np.asarray(v)
    i, j = np.triu_indices(v.size, k=1 if strict else 0)
    return v[i] + v[j]


def y_factor(symmetry, shifts):
    """Ratio of zeta(1 + .) products carrying the poles and zeros.

    ``U``: zeta(1+a+b) zeta(1+g+d) / (zeta(1+a+d) zeta(1+b+g)).
    ``S``: j <= k for alpha pairs, q < r for gamma pairs.
    ``O``: j < k, q < r, and an extra zeta(1 + 2 gamma_q).
    """
    a, b, g, d = shifts.arrays()
    if symmetry == "U":
        num = np.prod(_zeta1(_pair_sum(a, b))) * np.prod(_zeta1(_pair_sum(g, d)))
        inv = np.prod(_inv_zeta1(_pair_sum(a, d))) * np.prod(_inv_zeta1(_pair_sum(b, g)))
        return complex(num * inv)
    if b.size or d.size:
        raise InvalidInput("symplectic/orthogonal blocks take alpha and gamma only")
    if symmetry == "S":
        num = np.prod(_zeta1(_upper(a, False))) * np.prod(_zeta1(_upper(g, True)))
    elif symmetry == "O":
        num = (np.prod(_zeta1(_upper(a, True))) * np.prod(_zeta1(_upper(g, True)))
               * np.prod(_zeta1(2 * g)))
    else:
        raise InvalidInput("symmetry must be 'U', 'S' or 'O'")
    return complex(num * np.prod(_inv_zeta1(_pair_sum(a, g))))


# helpers ---------------------------------------------------------------------

def _check_disk(shifts, cfg):
    allv = shifts.all_shifts()
    if allv.size and np.abs(allv).max() > cfg.disk_radius + 1e-12:
        raise InvalidInput(f"shift outside the convergence disk |s| <= {cfg.disk_radius}")


def _powers(p, shifts_block):
    """p^(-1/2 - s) for every prime (rows) and shift (columns)."""
    p = np.asarray(p, dtype=float)
    s = np.asarray(shifts_block, dtype=complex)
    return np.exp(-np.outer(np.log(p), 0.5 + s))


def _one_minus_pp(p, sums):
    # prod over the given shift sums of (1 - p^(-1-sum)), per prime
    if len(sums) == 0:
        return np.ones(np.size(p), dtype=complex)
    lp = np.log(np.asarray(p, dtype=float))
    return np.prod(1.0 - np.exp(-np.outer(lp, 1.0 + np.asarray(sums))), axis=1)


def _prime_blocks(primes):
    """Split primes into dyadic ranges [2^j, 2^(j+1))."""
    if primes.size == 0:
        return []
    edges = 2 ** np.arange(1, int(np.log2(primes[-1])) + 2)
    idx = np.searchsorted(primes, edges)
    out, start = [], 0
    for stop in idx:
        if stop > start:
            out.append(slice(start, stop))
        start = stop
    if start < primes.size:
        out.append(slice(start, primes.size))
    return out


def _series_order(rho, n_factors, floor):
    """Degree M with rho^M * M^n_factors below the series tolerance."""
    rho = float(rho)
    if rho <= 0:
        return floor
    m = floor
    while rho ** m * (m + 1) ** max(n_factors - 1, 0) > _SERIES_EPS:
        m += 8
        if m > 20000:
            raise InvalidInput("lattice series too slowly convergent")
    return m


def _series_coeffs(geo, lin, M, lin_weights=None):
    """Coefficients 0..M of prod 1/(1 - geo_k X) * prod (1 - lin_q X).

    ``geo`` and ``lin`` have shape (P, k). Rows are primes.
    """
    P = geo.shape[0] if geo.size else lin.shape[0]
    c = np.zeros((P, M + 1), dtype=complex)
    c[:, 0] = 1.0
    for k in range(geo.shape[1]):
        x = geo[:, k]
        for n in range(1, M + 1):
            c[:, n] += x * c[:, n - 1]
    for q in range(lin.shape[1]):
        u = lin[:, q]
        c[:, 1:] = c[:, 1:] - u[:, None] * c[:, :-1].copy()
    return c


def _poly_mul(c, factor):
    """Multiply truncated series rows ``c`` by rows of ``factor`` (same length)."""
    M = c.shape[1] - 1
    out = np.zeros_like(c)
    for j in range(factor.shape[1]):
        if j > M:
            break
        out[:, j:] += factor[:, j:j + 1] * c[:, :M + 1 - j]
    return out


# A_zeta ----------------------------------------------------------------------

def zeta_prefactor(p, shifts):
    """Per-prime factor cancelling the zeta(1 + .) poles and zeros of Y_U."""
    a, b, g, d = shifts.arrays()
    num = _one_minus_pp(p, _pair_sum(a, b)) * _one_minus_pp(p, _pair_sum(g, d))
    den = _one_minus_pp(p, _pair_sum(a, d)) * _one_minus_pp(p, _pair_sum(b, g))
    return num / den


def zeta_local_theta(p, shifts, nodes=128):
    """Circle-integral form of the local sum, nodes doubled to 1e-13."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    a, b, g, d = shifts.arrays()
    xa, xb, xg, xd = (_powers(p, v) for v in (a, b, g, d))

    def evaluate(n):
        e = np.exp(2j * np.pi * np.arange(n) / n)[None, None, :]
        val = np.ones((p.size, n), dtype=complex)
        if xg.size:
            val *= np.prod(1.0 - e * xg[:, :, None], axis=1)
        if xd.size:
            val *= np.prod(1.0 - e.conj() * xd[:, :, None], axis=1)
        if xa.size:
            val /= np.prod(1.0 - e * xa[:, :, None], axis=1)
        if xb.size:
            val /= np.prod(1.0 - e.conj() * xb[:, :, None], axis=1)
        return val.mean(axis=1)

    n = nodes
    prev = evaluate(n)
    while True:
        n *= 2
        cur = evaluate(n)
        if np.all(np.abs(cur - prev) <= _THETA_TOL * np.abs(cur)):
            return cur
        if n > 1 << 16:
            raise InvalidInput("theta quadrature failed to converge")
        prev = cur


def zeta_local_lattice(p, shifts, order=12):
    """Lattice form: sum_n F_n G_n with F, G the two generating series."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    a, b, g, d = shifts.arrays()
    xa, xb, xg, xd = (_powers(p, v) for v in (a, b, g, d))
    ra = np.abs(xa).max() if xa.size else 0.0
    rb = np.abs(xb).max() if xb.size else 0.0
    rho = max(ra, np.abs(xg).max() if xg.size else 0.0) * \
        max(rb, np.abs(xd).max() if xd.size else 0.0)
    M = _series_order(rho, a.size + b.size, order)
    F = _series_coeffs(xa, xg, M)
    G = _series_coeffs(xb, xd, M)
    return (F * G).sum(axis=1)


def _local_zeta(p, shifts, cfg, form):
    if form == "thetaIntegral":
        loc = zeta_local_theta(p, shifts, cfg.theta_nodes)
    elif form == "latticeSum":
        loc = zeta_local_lattice(p, shifts, cfg.lattice_order)
    else:
        raise InvalidInput("form must be 'thetaIntegral' or 'latticeSum'")
    return zeta_prefactor(p, shifts) * loc


def euler_product(local, cfg, primes=None):
    """Multiply ``local(p_block)`` over primes up to the cutoff.

    ``local`` receives a block of primes and returns their local factors.
    Returns an ``EulerProduct`` whose ``tail`` is |prod(P) - prod(P/2)|,
    floored at the rounding level of the log-sum.
    """
    if primes is None:
        primes = prime_table(cfg.prime_cutoff).primes
    logs = np.empty(primes.size, dtype=complex)
    for blk in _prime_blocks(primes):
        vals = local(primes[blk])
        if np.any(vals == 0):
            return EulerProduct(0j, 0.0, int(primes.size), cfg.prime_cutoff)
        logs[blk] = np.log(vals)
    half = np.searchsorted(primes, cfg.prime_cutoff // 2, side="right")
    full = np.exp(logs.sum())
    partial = np.exp(logs[:half].sum())
    rounding = 4 * primes.size * np.finfo(float).eps * abs(full)
    tail = float(max(abs(full - partial), rounding))
    if cfg.tail_policy == "doubling-check" and tail > cfg.tail_tol * max(abs(full), 1e-300):
        raise TailNotConverged(
            f"Euler product changed by {tail:.3e} between P/2 and P = {cfg.prime_cutoff}")
    return EulerProduct(complex(full), tail, int(primes.size), cfg.prime_cutoff)


def a_zeta(shifts, cfg=EulerConfig(), form="thetaIntegral", full=False):
    """A_zeta(alpha; beta; gamma; delta) truncated at ``cfg.prime_cutoff``."""
    _check_disk(shifts, cfg)
    res = euler_product(lambda p: _local_zeta(p, shifts, cfg, form), cfg)
    return res if full else res.value


# A_D ---------------------------------------------------------------------------

def _symmetric_prefactor(p, alpha, gamma, alpha_strict, gamma_strict, two_gamma):
    num = _one_minus_pp(p, _upper(alpha, alpha_strict)) * _one_minus_pp(p, _upper(gamma, gamma_strict))
    if two_gamma:
        num = num * _one_minus_pp(p, 2 * np.asarray(gamma))
    return num / _one_minus_pp(p, _pair_sum(alpha, gamma))


def quadratic_local_closed(p, alpha, gamma):
    """(1+1/p)^-1 [f(1)/2 + f(-1)/2 + 1/p] for the quadratic family."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    xa = _powers(p, alpha)
    xg = _powers(p, gamma)

    def f(sig):
        return np.prod(1.0 - sig * xg, axis=1) / np.prod(1.0 - sig * xa, axis=1)

    return (0.5 * f(1.0) + 0.5 * f(-1.0) + 1.0 / p) / (1.0 + 1.0 / p)


def _even_degree_sum(F, p):
    even = F[:, 2::2].sum(axis=1)
    return 1.0 + even / (1.0 + 1.0 / p)


def quadratic_local_direct(p, alpha, gamma, order=12):
    """Direct sum over lattice points with even total degree."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    xa = _powers(p, alpha)
    xg = _powers(p, gamma)
    rho = max(np.abs(xa).max() if xa.size else 0.0, np.abs(xg).max() if xg.size else 0.0)
    M = _series_order(rho, xa.shape[1], order)
    return _even_degree_sum(_series_coeffs(xa, xg, M), p)


def a_quadratic(alpha, gamma, cfg=EulerConfig(), form="closed", full=False):
    """A_D(alpha; gamma) for the family of real characters."""
    _check_disk(ShiftSet(alpha, (), gamma), cfg)
    a = np.asarray(alpha, dtype=complex).ravel()
    g = np.asarray(gamma, dtype=complex).ravel()

    def local(p):
        pre = _symmetric_prefactor(p, a, g, False, True, False)
        if form == "closed":
            return pre * quadratic_local_closed(p, a, g)
        return pre * quadratic_local_direct(p, a, g, cfg.lattice_order)

    res = euler_product(local, cfg)
    return res if full else res.value


# A_E ---------------------------------------------------------------------------

def _lambda_for(primes, table):
    if table is None:
        table = e11_coefficients(int(max(primes.max(), 100)))
    if primes.max() > table.max_index:
        raise MissingCoefficients(f"coefficients known to {table.max_index} only")
    return table.lam[primes.astype(np.int64)]


def elliptic_local_closed(p, alpha, gamma, lam_p):
    """Even-part closed form for the twists of E11 (both branches)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lam_p = np.atleast_1d(lam_p)
    xa = _powers(p, alpha)
    xg = _powers(p, gamma)
    bad = p == E11_CONDUCTOR
    lam = lam_p[:, None]

    def f(sig):
        num = 1.0 - sig * lam * xg + np.where(bad[:, None], 0.0, xg ** 2)
        den = 1.0 - sig * lam * xa + np.where(bad[:, None], 0.0, xa ** 2)
        return np.prod(num, axis=1) / np.prod(den, axis=1)

    return (0.5 * f(1.0) + 0.5 * f(-1.0) + 1.0 / p) / (1.0 + 1.0 / p)


def lambda_prime_powers(lam_p, p, M):
    """lambda(p^a), a = 0..M, from the Hecke recursion (rows are primes)."""
    lam_p = np.atleast_1d(np.asarray(lam_p, dtype=float))
    p = np.atleast_1d(p)
    out = np.zeros((lam_p.size, M + 1))
    out[:, 0] = 1.0
    if M >= 1:
        out[:, 1] = lam_p
    chi0 = np.where(p == E11_CONDUCTOR, 0.0, 1.0)
    for a in range(2, M + 1):
        out[:, a] = lam_p * out[:, a - 1] - chi0 * out[:, a - 2]
    return out


def elliptic_local_direct(p, alpha, gamma, lam_p, order=12):
    """Direct even-degree lattice sum with lambda(p^a) and mu_E(p^c) weights."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lam_p = np.atleast_1d(lam_p)
    xa = _powers(p, alpha)
    xg = _powers(p, gamma)
    rho = max(np.abs(xa).max() if xa.size else 0.0, np.abs(xg).max() if xg.size else 0.0)
    M = _series_order(rho, 2 * xa.shape[1] + 1, order)
    lp = lambda_prime_powers(lam_p, p, M)
    c = np.zeros((p.size, M + 1), dtype=complex)
    c[:, 0] = 1.0
    chi0 = np.where(p == E11_CONDUCTOR, 0.0, 1.0)
    deg = np.arange(M + 1)
    for k in range(xa.shape[1]):
        c = _poly_mul(c, lp * xa[:, k:k + 1] ** deg[None, :])
    for q in range(xg.shape[1]):
        mu = np.zeros((p.size, M + 1), dtype=complex)
        mu[:, 0] = 1.0
        mu[:, 1] = -lam_p * xg[:, q]
        if M >= 2:
            mu[:, 2] = chi0 * xg[:, q] ** 2
        c = _poly_mul(c, mu)
    return _even_degree_sum(c, p)


def a_elliptic(alpha, gamma, cfg=EulerConfig(), form="closed", table=None, full=False):
    """A_{E(D)}(alpha; gamma) for the quadratic twists of E11."""
    _check_disk(ShiftSet(alpha, (), gamma), cfg)
    a = np.asarray(alpha, dtype=complex).ravel()
    g = np.asarray(gamma, dtype=complex).ravel()
    if table is None:
        table = e11_coefficients(int(cfg.prime_cutoff))
    elif table.max_index < cfg.prime_cutoff:
        raise MissingCoefficients(f"coefficients known to {table.max_index} only")

    def local(p):
        lam = _lambda_for(p, table)
        pre = _symmetric_prefactor(p, a, g, True, True, True)
        if form == "closed":
            return pre * elliptic_local_closed(p, a, g, lam)
        return pre * elliptic_local_direct(p, a, g, lam, cfg.lattice_order)

    res = euler_product(local, cfg)
    return res if full else res.value


# shifted Keating-Snaith product ------------------------------------------------

def _elementary(v):
    # e_0..e_K of the columns of v, per row
    P, K = v.shape
    e = np.zeros((P, K + 1), dtype=complex)
    e[:, 0] = 1.0
    for k in range(K):
        e[:, 1:] = e[:, 1:] + v[:, k:k + 1] * e[:, :-1].copy()
    return e


def _complete(x, M):
    # h_0..h_M of the columns of x, per row
    return _series_coeffs(x, np.zeros((x.shape[0], 0)), M)


def ks_local_closed(p, alpha, delta):
    """sum_m (-1)^m e_m(v) h_m(x): the finite local sum of B."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    x = _powers(p, alpha)
    v = _powers(p, delta)
    K = v.shape[1]
    e = _elementary(v)
    h = _complete(x, K)
    sign = (-1.0) ** np.arange(K + 1)
    return (sign[None, :] * e * h).sum(axis=1)


def ks_local_lattice(p, alpha, delta, order=12):
    """Brute lattice sum over (a, d) with sum a = sum d, d in {0,1}^K."""
    return zeta_local_lattice(p, ShiftSet(alpha, (), (), delta), order)


def ks_b(alphas, deltas, cfg=EulerConfig(), form="closed", full=False):
    """B(alpha, delta) = prod_p prod (1 - p^(-1-a_i-d_j))^-1 * local sum."""
    a = np.asarray(alphas, dtype=complex).ravel()
    d = np.asarray(deltas, dtype=complex).ravel()
    if a.size != d.size:
        raise InvalidInput("B needs as many alphas as deltas")
    _check_disk(ShiftSet(a, (), (), d), cfg)

    def local(p):
        pre = 1.0 / _one_minus_pp(p, _pair_sum(a, d))
        if form == "closed":
            return pre * ks_local_closed(p, a, d)
        return pre * ks_local_lattice(p, a, d, cfg.lattice_order)

    res = euler_product(local, cfg)
    return res if full else res.value


# prime sums for the log-derivative and discrete moments -----------------------

def logderiv_c(r, cfg=EulerConfig(), full=False):
    """c(r) = sum_p [-p^(1+2r) log^2 p / (p^(1+2r) - 1)^2 + circle integral].

    The circle integral of log^2 p / ((e p^s - 1)(conj(e) p^s - 1)),
    s = 1/2 + r, is evaluated by the trapezoid rule with node doubling.
    """
    primes = prime_table(cfg.prime_cutoff).primes.astype(float)
    lp = np.log(primes)
    ps = np.exp((0.5 + r) * lp)
    q = ps * ps
    first = -q * lp ** 2 / (q - 1.0) ** 2
    n = cfg.theta_nodes
    prev = None
    while True:
        e = np.exp(2j * np.pi * np.arange(n) / n)
        vals = np.empty(primes.size, dtype=complex)
        for blk in _prime_blocks(primes.astype(np.int64)):
            den = (e[None, :] * ps[blk, None] - 1.0) * (e.conj()[None, :] * ps[blk, None] - 1.0)
            vals[blk] = (lp[blk, None] ** 2 / den).mean(axis=1)
        if prev is not None and np.all(np.abs(vals - prev) <= _THETA_TOL * np.abs(vals)):
            break
        prev = vals
        n *= 2
    terms = first + vals
    total = terms.sum()
    half = np.searchsorted(primes, cfg.prime_cutoff // 2, side="right")
    tail = float(abs(terms[half:].sum()))
    return EulerProduct(complex(total), tail, primes.size, cfg.prime_cutoff) if full else complex(total)


def logderiv_c_closed(r, cfg=EulerConfig()):
    """Closed form -sum_p log^2 p / (p^(1+2r) - 1)^2."""
    primes = prime_table(cfg.prime_cutoff).primes.astype(float)
    lp = np.log(primes)
    q = np.exp((1.0 + 2 * r) * lp)
    return complex(-(lp ** 2 / (q - 1.0) ** 2).sum())


def prime_log_square_sum(r, cfg=EulerConfig()):
    """sum_p log^2 p / (p^s - 1), s = 1 + 2r, summed over all primes.

    Equals (zeta'/zeta)'(s) - sum_p log^2 p x^2 / (1 - x)^2 with x = p^-s;
    the correction converges absolutely for Re s > 1/2 and is truncated at
    ``cfg.prime_cutoff``.
    """
    s = 1.0 + 2 * r
    primes = prime_table(cfg.prime_cutoff).primes.astype(float)
    lp = np.log(primes)
    x = np.exp(-s * lp)
    corr = (lp ** 2 * x ** 2 / (1.0 - x) ** 2).sum()
    return complex(zeta_logderiv_prime(s) - corr)


def discrete_prime_sum(a, c, cfg=EulerConfig(), full=False):
    """beta-derivative of log A at beta = 0: sum_p log p u (v - u)/((1-u)(1-v)).

    u = p^(-1-c), v = p^(-1-a); the sum vanishes identically at a = c.
    """
    primes = prime_table(cfg.prime_cutoff).primes.astype(float)
    lp = np.log(primes)
    u = np.exp(-(1.0 + c) * lp)
    v = np.exp(-(1.0 + a) * lp)
    terms = lp * u * (v - u) / ((1.0 - u) * (1.0 - v))
    half = np.searchsorted(primes, cfg.prime_cutoff // 2, side="right")
    total = complex(terms.sum())
    tail = float(abs(terms[half:].sum()))
    return EulerProduct(total, tail, primes.size, cfg.prime_cutoff) if full else total


def discrete_swap_product(a, c, cfg=EulerConfig(), full=False):
    """prod_p (1-u)(1 - w - 1/p + u) / ((1-w)(1-1/p)), u = p^(-1-c), w = p^(-1-c+a)."""
    def local(p):
        p = p.astype(float)
        lp = np.log(p)
        u = np.exp(-(1.0 + c) * lp)
        w = np.exp(-(1.0 + c - a) * lp)
        return (1.0 - u) * (1.0 - w - 1.0 / p + u) / ((1.0 - w) * (1.0 - 1.0 / p))

    res = euler_product(local, cfg)
    return res if full else res.value
