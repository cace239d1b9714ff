"""Exact group averages of ratios of characteristic polynomials.

The unitary average is a sum over the permutations in Xi_{K,L}; the
symplectic and orthogonal averages are sums over sign vectors. Both are
assembled from z(x) = 1 / (1 - exp(-x)).
"""

from itertools import combinations, product

import numpy as np

from ..errors import CoincidentShifts
from ..special import z_rmt
from .groups import check_ratio_spec

__all__ = ["xi_permutations", "sign_vectors", "y_u", "y_s", "y_o",
           "theorem_rhs", "inv_z"]

_GUARD = 1e-8


def xi_permutations(K, L):
    """Permutations of range(K+L) increasing on the first K and last L slots."""
    n = K + L
    out = []
    for head in combinations(range(n), K):
        tail = tuple(i for i in range(n) if i not in head)
        out.append(head + tail)
    return out


def sign_vectors(K):
    """All eps in {-1, +1}^K."""
    return [np.array(e) for e in product((1, -1), repeat=K)]


def inv_z(x):
    """1 / z(x) = 1 - exp(-x), entire."""
    return -np.expm1(-np.asarray(x, dtype=complex))


def _z_checked(x):
    x = np.asarray(x, dtype=complex)
    if x.size:
        k = np.round(x.imag / (2 * np.pi))
        if np.any(np.abs(x - 2j * np.pi * k) < _GUARD):
            raise CoincidentShifts("a z-argument lies within 1e-8 of 2 pi i Z")
    return z_rmt(x)


def _pairs(v, w):
    return (np.asarray(v)[:, None] + np.asarray(w)[None, :]).ravel()


def _upper(v, strict):
    v = np.asarray(v)
    i, j = np.triu_indices(v.size, k=1 if strict else 0)
    return v[i] + v[j]


def y_u(alpha, beta, gamma, delta):
    """prod z(a+b) prod z(g+d) / (prod z(a+d) prod z(b+g))."""
    num = np.prod(_z_checked(_pairs(alpha, beta))) * np.prod(_z_checked(_pairs(gamma, delta)))
    den_inv = np.prod(inv_z(_pairs(alpha, delta))) * np.prod(inv_z(_pairs(beta, gamma)))
    return complex(num * den_inv)


def _y_sym(alpha, gamma, alpha_strict, gamma_strict):
    num = (np.prod(_z_checked(_upper(alpha, alpha_strict)))
           * np.prod(_z_checked(_upper(gamma, gamma_strict))))
    return complex(num * np.prod(inv_z(_pairs(alpha, gamma))))


def y_s(alpha, gamma):
    """Symplectic factor: z(a_j + a_k) over j <= k, z(g_q + g_r) over q < r."""
    return _y_sym(alpha, gamma, False, True)


def y_o(alpha, gamma):
    """Orthogonal factor: z(a_j + a_k) over j < k, z(g_q + g_r) over q <= r."""
    return _y_sym(alpha, gamma, True, False)


def theorem_rhs(group, shifts):
    """Exact Haar average of the ratio for ``group`` and ``shifts``.

    Raises ``CoincidentShifts`` when a pole of z is approached; the limit
    must then be taken by the caller (e.g. Richardson extrapolation).
    """
    check_ratio_spec(group, shifts)
    a, _, g, d = shifts.arrays()
    if group.kind == "Unitary":
        K, L = shifts.K, shifts.L
        comb = shifts.combined()
        base = comb[:K].sum()
        total = 0j
        for sigma in xi_permutations(K, L):
            ap = comb[list(sigma)]
            weight = np.exp(group.N * (ap[:K].sum() - base))
            total += weight * y_u(ap[:K], -ap[K:], g, d)
        return complex(total)
    n_eff = group.n_eff
    yfun = y_s if group.kind == "Symplectic" else y_o
    signed = group.kind == "SOOdd"
    total = 0j
    for eps in sign_vectors(shifts.K):
        w = eps * a
        term = np.exp(n_eff * (w - a).sum()) * yfun(w, g)
        if signed:
            term *= np.prod(eps)
        total += term
    return complex(total)
