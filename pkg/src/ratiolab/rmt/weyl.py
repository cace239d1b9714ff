"""Independent Haar averages by quadrature against the Weyl density.

The eigenangle integrands are smooth and periodic, so the tensor trapezoid
rule converges geometrically; nodes are doubled until two levels agree.
Integrals over [0, pi]^N are taken as half-period integrals of even
functions over [0, 2 pi)^N.
"""

import math

import numpy as np

from ..errors import InvalidInput, QuadratureNotConverged
from .groups import check_ratio_spec, ratio_statistic_batch

__all__ = ["weyl_density", "weyl_oracle"]

_MAX_POINTS = 1 << 22


def _log_const(kind, N):
    if kind == "Unitary":
        return -N * math.log(2 * math.pi) - math.lgamma(N + 1)
    expo = {"Symplectic": N * N, "SOEven": (N - 1) ** 2, "SOOdd": N * N}[kind]
    return expo * math.log(2) - N * math.log(math.pi) - math.lgamma(N + 1)


def weyl_density(kind, theta):
    """Joint eigenangle density at the rows of ``theta`` (shape (M, N)).

    Unitary angles range over [0, 2pi)^N; the other groups over [0, pi]^N.
    """
    theta = np.atleast_2d(theta)
    N = theta.shape[1]
    c = math.exp(_log_const(kind, N))
    i, j = np.triu_indices(N, k=1)
    if kind == "Unitary":
        e = np.exp(1j * theta)
        vdm = np.prod(np.abs(e[:, i] - e[:, j]) ** 2, axis=1)
        return c * vdm
    cth = np.cos(theta)
    vdm = np.prod((cth[:, i] - cth[:, j]) ** 2, axis=1)
    if kind == "Symplectic":
        vdm = vdm * np.prod(np.sin(theta) ** 2, axis=1)
    elif kind == "SOOdd":
        vdm = vdm * np.prod(np.sin(theta / 2) ** 2, axis=1)
    return c * vdm


def _full_eigs(kind, theta):
    e = np.exp(1j * theta)
    if kind == "Unitary":
        return e
    ev = np.concatenate([e, e.conj()], axis=1)
    if kind == "SOOdd":
        ev = np.concatenate([ev, np.ones((ev.shape[0], 1))], axis=1)
    return ev


def _grid_value(group, shifts, n):
    N = group.N
    nodes = 2 * np.pi * np.arange(n) / n
    kind = group.kind
    total = 0j
    rest = np.stack(np.meshgrid(*([nodes] * (N - 1)), indexing="ij"), -1).reshape(-1, N - 1) \
        if N > 1 else np.zeros((1, 0))
    for t0 in nodes:
        theta = np.concatenate([np.full((rest.shape[0], 1), t0), rest], axis=1)
        rho = weyl_density(kind, theta)
        vals, _ = ratio_statistic_batch(_full_eigs(kind, theta), shifts)
        total += np.sum(rho * vals)
    mean = total / n ** N
    # density integral = (period)^N * mean; half-period for the [0, pi] groups
    scale = (2 * np.pi) ** N if kind == "Unitary" else np.pi ** N
    return complex(mean * scale)


def weyl_oracle(group, shifts, nodes_per_dim=16, tol=1e-10, max_nodes=None):
    """Haar average of the ratio statistic by Weyl-density quadrature.

    Starts at ``nodes_per_dim`` nodes per angle and doubles until the
    relative change is below ``tol``.
    """
    check_ratio_spec(group, shifts)
    N = group.N
    if N > 3 or N < 1:
        raise InvalidInput("weyl_oracle supports eigenangle dimension 1..3")
    if max_nodes is None:
        max_nodes = int(round(_MAX_POINTS ** (1.0 / N)))
    n = nodes_per_dim
    prev = _grid_value(group, shifts, n)
    while 2 * n <= max_nodes:
        n *= 2
        cur = _grid_value(group, shifts, n)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureNotConverged(f"Weyl quadrature unconverged at {n} nodes per angle")
