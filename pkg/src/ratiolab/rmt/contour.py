"""Exact averages rewritten as multiple integrals over unit circles.

The permutation sum over Xi_{K,L} and the sign-vector sums are residue
expansions of circle integrals with a squared Vandermonde. The integrals
are evaluated by the trapezoid rule with a distinct angular offset in every
dimension, so the removable singularities on coincident nodes are never hit.
"""

import math

import numpy as np

from ..errors import InvalidInput, PoleOnContour, QuadratureNotConverged
from ..special import z_rmt
from .exact import inv_z
from .groups import check_ratio_spec

__all__ = ["contour_rhs", "xi_sum_contour", "eps_sum_contour"]

_OFFSETS = np.array([0.1234, 0.4567, 0.7891, 0.2468])
_MAX_POINTS = 1 << 21


def _circle_nodes(n, dim):
    grids = [np.exp(2j * np.pi * (np.arange(n) + _OFFSETS[k]) / n) for k in range(dim)]
    mesh = np.meshgrid(*grids, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _vandermonde_sq(z):
    i, j = np.triu_indices(z.shape[1], k=1)
    return np.prod((z[:, i] - z[:, j]) ** 2, axis=1)


def _check_inside(points):
    if np.any(np.abs(points) >= 1 - 1e-6):
        raise PoleOnContour("shift on or outside the unit circle")


def _converge(evaluate, dim, n0, tol):
    n = n0
    prev = evaluate(n)
    while (2 * n) ** dim <= _MAX_POINTS:
        n *= 2
        cur = evaluate(n)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureNotConverged(f"circle quadrature unconverged at {n} nodes")


def xi_sum_contour(H, a, K, n0=32, tol=1e-11):
    """sum_{sigma in Xi_{K,L}} H(a_sigma) as a (K+L)-fold circle integral.

    ``H`` maps an (M, K+L) array of points to M values and must be
    symmetric in its first K and last K+L-K arguments.
    """
    a = np.asarray(a, dtype=complex)
    n_var = a.size
    L = n_var - K
    _check_inside(a)
    const = (-1) ** (n_var * (n_var - 1) // 2) / (math.factorial(K) * math.factorial(L))

    def evaluate(n):
        z = _circle_nodes(n, n_var)
        den = np.prod(z[:, :, None] - a[None, None, :], axis=(1, 2))
        # dz / (2 pi i) = z dtheta / (2 pi)
        vals = H(z) * _vandermonde_sq(z) / den * np.prod(z, axis=1)
        return complex(const * vals.mean())

    return _converge(evaluate, n_var, n0, tol)


def eps_sum_contour(H, a, signed, n0=32, tol=1e-11):
    """sum_eps [sgn(eps)] H(eps_1 a_1, ..., eps_K a_K) as a K-fold circle integral.

    The unsigned sum uses the prod z_k numerator, the signed sum prod a_k.
    """
    a = np.asarray(a, dtype=complex)
    K = a.size
    _check_inside(a)
    const = (-1) ** (K * (K - 1) // 2) * 2 ** K / math.factorial(K)

    def evaluate(n):
        z = _circle_nodes(n, K)
        den = np.prod((z[:, :, None] - a[None, None, :]) * (z[:, :, None] + a[None, None, :]),
                      axis=(1, 2))
        num = np.prod(a) if signed else np.prod(z, axis=1)
        vals = H(z) * _vandermonde_sq(z ** 2) * num / den * np.prod(z, axis=1)
        return complex(const * vals.mean())

    return _converge(evaluate, K, n0, tol)


def _rows_pairs(v, w):
    return (v[:, :, None] + w[:, None, :]).reshape(v.shape[0], -1)


def _rows_upper(v, strict):
    i, j = np.triu_indices(v.shape[1], k=1 if strict else 0)
    return v[:, i] + v[:, j]


def contour_rhs(group, shifts, nodes_per_dim=32, tol=1e-11):
    """Exact Haar average through the circle-integral representation."""
    check_ratio_spec(group, shifts)
    a, _, g, d = shifts.arrays()
    if group.kind == "Unitary":
        K, L = shifts.K, shifts.L
        if K + L == 0:
            return complex(np.prod(z_rmt(_pairs1(g, d))) if g.size and d.size else 1.0)
        if K + L > 3:
            raise InvalidInput("contour_rhs supports K + L <= 3")
        comb = shifts.combined()
        N = group.N
        zgd = np.prod(z_rmt((g[:, None] + d[None, :]).ravel())) if g.size and d.size else 1.0

        def H(w):
            head, tail = w[:, :K], -w[:, K:]
            expo = 0.5 * N * (head.sum(axis=1) + tail.sum(axis=1))
            val = np.exp(expo) * zgd
            if K and L:
                val = val * np.prod(z_rmt(_rows_pairs(head, tail)), axis=1)
            if K and d.size:
                val = val * np.prod(inv_z(_rows_pairs(head, np.tile(d, (w.shape[0], 1)))), axis=1)
            if L and g.size:
                val = val * np.prod(inv_z(_rows_pairs(tail, np.tile(g, (w.shape[0], 1)))), axis=1)
            return val

        pref = np.exp(0.5 * N * (-comb[:K].sum() + comb[K:].sum()))
        return complex(pref * xi_sum_contour(H, comb, K, nodes_per_dim, tol))

    K = shifts.K
    n_eff = group.n_eff
    symp = group.kind == "Symplectic"
    gpair = _upper1(g, strict=symp)
    zgg = np.prod(z_rmt(gpair)) if gpair.size else 1.0
    if K == 0:
        return complex(zgg)
    if K > 3:
        raise InvalidInput("contour_rhs supports K <= 3")

    def H(w):
        val = np.exp(n_eff * w.sum(axis=1)) * zgg
        ww = _rows_upper(w, strict=not symp)
        if ww.shape[1]:
            val = val * np.prod(z_rmt(ww), axis=1)
        if g.size:
            val = val * np.prod(inv_z(_rows_pairs(w, np.tile(g, (w.shape[0], 1)))), axis=1)
        return val

    signed = group.kind == "SOOdd"
    val = eps_sum_contour(H, a, signed, nodes_per_dim, tol)
    return complex(np.exp(-n_eff * a.sum()) * val)


def _pairs1(v, w):
    return (v[:, None] + w[None, :]).ravel()


def _upper1(v, strict):
    i, j = np.triu_indices(v.size, k=1 if strict else 0)
    return v[i] + v[j]
