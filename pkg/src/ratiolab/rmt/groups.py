"""Compact groups, Haar samplers and characteristic-polynomial ratios."""

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateQR, InvalidInput, NearSingularSample

__all__ = ["GroupSpec", "EigenphaseSet", "GROUP_KINDS", "haar_matrices",
           "haar_eigenvalues", "haar_sample", "ratio_statistic",
           "ratio_statistic_batch", "mc_average", "check_ratio_spec"]

GROUP_KINDS = ("Unitary", "Symplectic", "SOEven", "SOOdd")
_PIVOT_TOL = 1e-12
_SINGULAR_TOL = 1e-13


@dataclass(frozen=True)
class GroupSpec:
    """U(N), USp(2N), SO(2N) or SO(2N+1), labelled by ``kind`` and ``N``."""

    kind: str
    N: int

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise InvalidInput(f"unknown group kind {self.kind!r}")
        if self.N < (0 if self.kind == "SOOdd" else 1):
            raise InvalidInput("N too small for this group")

    @property
    def matrix_size(self):
        return {"Unitary": self.N, "Symplectic": 2 * self.N,
                "SOEven": 2 * self.N, "SOOdd": 2 * self.N + 1}[self.kind]

    @property
    def n_eff(self):
        """Half the matrix size; plays the part of N in the exact formulas."""
        return self.N + 0.5 if self.kind == "SOOdd" else float(self.N)

    def label(self):
        name = {"Unitary": "U", "Symplectic": "USp", "SOEven": "SO",
                "SOOdd": "SO"}[self.kind]
        return f"{name}({self.matrix_size})"


@dataclass(frozen=True)
class EigenphaseSet:
    """Eigenangles of one group element.

    Unitary: ``phases`` in [0, 2pi). Other groups: one angle in [0, pi] per
    conjugate pair, plus the fixed eigenvalue 1 when ``has_fixed_one``.
    """

    kind: str
    phases: np.ndarray
    has_fixed_one: bool = False

    def eigenvalues(self):
        th = np.asarray(self.phases, dtype=float)
        if self.kind == "Unitary":
            return np.exp(1j * th)
        ev = np.concatenate([np.exp(1j * th), np.exp(-1j * th)])
        if self.has_fixed_one:
            ev = np.append(ev, 1.0 + 0j)
        return ev


def check_ratio_spec(group, shifts):
    """Validate a shift set against the group and the size constraints."""
    K, L, Q, R = shifts.K, shifts.L, shifts.Q, shifts.R
    N = group.N
    _, _, g, d = shifts.arrays()
    if np.any(g.real <= 0) or np.any(d.real <= 0):
        raise InvalidInput("denominator shifts need positive real part")
    if group.kind == "Unitary":
        if N < max(Q - K, R - L):
            raise InvalidInput("U(N) needs N >= max(Q-K, R-L)")
        return
    if L or R:
        raise InvalidInput("symplectic and orthogonal ratios use alpha/gamma only")
    need = {"Symplectic": Q - K - 1, "SOEven": Q - K + 1, "SOOdd": Q - K}[group.kind]
    if 2 * N < need:
        raise InvalidInput(f"{group.label()} violates the size constraint 2N >= {need}")


# samplers -----------------------------------------------------------------

def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _haar_unitary(rng, batch, n):
    z = _complex_gaussian(rng, (batch, n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    if np.any(np.abs(d) < _PIVOT_TOL):
        raise DegenerateQR("zero pivot in complex QR")
    return q * (d / np.abs(d))[:, None, :]


def _haar_orthogonal(rng, batch, n):
    z = rng.standard_normal((batch, n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    if np.any(np.abs(d) < _PIVOT_TOL):
        raise DegenerateQR("zero pivot in real QR")
    q = q * np.sign(d)[:, None, :]
    # move the det = -1 half onto SO(n) by flipping one column
    neg = np.linalg.det(q) < 0
    q[neg, :, 0] *= -1
    return q


def _quaternion_partner(v, n):
    # J(x; y) = (-conj(y); conj(x)) maps a column to its symplectic partner
    return np.concatenate([-v[..., n:].conj(), v[..., :n].conj()], axis=-1)


def _haar_symplectic(rng, batch, n):
    a = _complex_gaussian(rng, (batch, n, n))
    b = _complex_gaussian(rng, (batch, n, n))
    cols = np.concatenate([a, -b.conj()], axis=1)       # (batch, 2n, n)
    basis = np.zeros((batch, 2 * n, 2 * n), dtype=complex)
    for k in range(n):
        v = cols[:, :, k]
        for _ in range(2):  # re-orthogonalise once for stability
            if k:
                u = basis[:, :, :k]
                w = basis[:, :, n:n + k]
                v = v - np.einsum("bij,bj->bi", u, np.einsum("bij,bi->bj", u.conj(), v))
                v = v - np.einsum("bij,bj->bi", w, np.einsum("bij,bi->bj", w.conj(), v))
        nrm = np.linalg.norm(v, axis=1)
        if np.any(nrm < _PIVOT_TOL):
            raise DegenerateQR("zero pivot in quaternionic Gram-Schmidt")
        v = v / nrm[:, None]
        basis[:, :, k] = v
        basis[:, :, n + k] = _quaternion_partner(v, n)
    return basis


def haar_matrices(group, rng, size):
    """``size`` independent Haar-distributed matrices of the group."""
    n = group.matrix_size
    if n == 0:
        return np.ones((size, 1, 1))
    if group.kind == "Unitary":
        return _haar_unitary(rng, size, n)
    if group.kind == "Symplectic":
        return _haar_symplectic(rng, size, group.N)
    return _haar_orthogonal(rng, size, n)


def haar_eigenvalues(group, rng, size):
    """Eigenvalues of ``size`` Haar draws, shape (size, matrix_size)."""
    if group.kind == "SOOdd" and group.N == 0:
        return np.ones((size, 1), dtype=complex)
    ev = np.linalg.eigvals(haar_matrices(group, rng, size))
    return ev / np.abs(ev)


def _pair_phases(ev, drop_one):
    th = np.angle(ev)
    if drop_one:
        i1 = np.argmin(np.abs(ev - 1.0))
        th = np.delete(th, i1)
    th = np.sort(np.abs(th))
    return th[::2]


def haar_sample(group, rng):
    """Eigenphases of one Haar-distributed element."""
    ev = haar_eigenvalues(group, rng, 1)[0]
    if group.kind == "Unitary":
        return EigenphaseSet("Unitary", np.sort(np.mod(np.angle(ev), 2 * np.pi)))
    odd = group.kind == "SOOdd"
    return EigenphaseSet(group.kind, _pair_phases(ev, odd), has_fixed_one=odd)


# ratio statistic ------------------------------------------------------------

def _lambda(ev, x, star):
    # Lambda_A(x) = prod(1 - x conj(lambda)); Lambda_{A*}(x) = prod(1 - x lambda)
    e = ev if star else ev.conj()
    return 1.0 - x[None, :, None] * e[:, None, :]


def ratio_statistic_batch(eigvals, shifts):
    """Ratio of characteristic polynomials for each row of ``eigvals``.

    Returns (values, singular) where ``singular`` flags rows with a
    denominator factor below 1e-13 in modulus.
    """
    ev = np.atleast_2d(np.asarray(eigvals, dtype=complex))
    a, b, g, d = shifts.arrays()
    val = np.ones(ev.shape[0], dtype=complex)
    singular = np.zeros(ev.shape[0], dtype=bool)
    if a.size:
        val *= _lambda(ev, np.exp(-a), False).prod(axis=(1, 2))
    if b.size:
        val *= _lambda(ev, np.exp(-b), True).prod(axis=(1, 2))
    for x, star in ((g, False), (d, True)):
        if x.size:
            fac = _lambda(ev, np.exp(-x), star)
            singular |= (np.abs(fac) < _SINGULAR_TOL).any(axis=(1, 2))
            val /= fac.prod(axis=(1, 2))
    return val, singular


def ratio_statistic(phases, shifts):
    """Ratio statistic for a single ``EigenphaseSet``."""
    val, singular = ratio_statistic_batch(phases.eigenvalues()[None, :], shifts)
    if singular[0]:
        raise NearSingularSample("denominator factor below 1e-13")
    return complex(val[0])


def mc_average(group, shifts, samples, seed, shards=1, batch=10_000):
    """Monte Carlo Haar average of the ratio statistic.

    Draws are split into ``shards`` substreams spawned from ``seed`` and
    recombined in shard order, so results are reproducible.

    Returns
    -------
    estimate : complex
    stderr : float
        sqrt(var(Re) + var(Im)) / sqrt(n).
    """
    if samples < 100:
        raise InvalidInput("need at least 100 samples")
    check_ratio_spec(group, shifts)
    if shifts.K + shifts.L + shifts.Q + shifts.R == 0:
        return 1.0 + 0j, 0.0
    children = np.random.SeedSequence(seed).spawn(shards)
    per = [samples // shards + (i < samples % shards) for i in range(shards)]
    vals = []
    rejected = 0
    for child, count in zip(children, per):
        rng = np.random.default_rng(child)
        done = 0
        while done < count:
            m = min(batch, count - done)
            ev = haar_eigenvalues(group, rng, m)
            v, bad = ratio_statistic_batch(ev, shifts)
            rejected += int(bad.sum())
            vals.append(v[~bad])
            done += m
    if rejected > 1e-3 * samples:
        raise NearSingularSample(f"{rejected} of {samples} draws rejected")
    v = np.concatenate(vals)
    est = v.mean()
    stderr = np.sqrt(v.real.var(ddof=1) + v.imag.var(ddof=1)) / np.sqrt(v.size)
    return complex(est), float(stderr)
