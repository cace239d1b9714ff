"""Shift containers and configuration dataclasses shared across modules."""

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidInput

__all__ = ["ShiftSet", "EulerConfig", "ConjectureValue", "FamilySpec",
           "FAMILY_KINDS"]


def _as_tuple(x):
    if x is None:
        return ()
    if np.ndim(x) == 0:
        x = [x]
    return tuple(complex(v) for v in x)


@dataclass(frozen=True)
class ShiftSet:
    """Shifts (alpha; beta; gamma; delta) of a ratio of L-functions.

    For unitary averages the alpha block multiplies ``Lambda_A`` and the beta
    block multiplies ``Lambda_{A*}`` through alpha_{K+l} = -beta_l. Symplectic
    and orthogonal families use only ``alpha`` and ``gamma``.
    """

    alpha: tuple = ()
    beta: tuple = ()
    gamma: tuple = ()
    delta: tuple = ()

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            vals = _as_tuple(getattr(self, name))
            if not all(np.isfinite(v) for v in vals):
                raise InvalidInput(f"non-finite shift in {name}")
            object.__setattr__(self, name, vals)

    @property
    def K(self):
        return len(self.alpha)

    @property
    def L(self):
        return len(self.beta)

    @property
    def Q(self):
        return len(self.gamma)

    @property
    def R(self):
        return len(self.delta)

    def arrays(self):
        """The four blocks as complex numpy arrays."""
        return tuple(np.array(b, dtype=complex)
                     for b in (self.alpha, self.beta, self.gamma, self.delta))

    def combined(self):
        """(alpha_1..alpha_K, -beta_1..-beta_L) as used by the unitary sums."""
        a, b, _, _ = self.arrays()
        return np.concatenate([a, -b])

    def is_symmetric_type(self):
        return self.L == 0 and self.R == 0

    def all_shifts(self):
        return np.concatenate(self.arrays())

    def to_dict(self):
        return {k: [[v.real, v.imag] for v in getattr(self, k)]
                for k in ("alpha", "beta", "gamma", "delta")}


@dataclass(frozen=True)
class EulerConfig:
    """Truncation controls for Euler products.

    Attributes
    ----------
    prime_cutoff : int
        Largest prime used in every product.
    theta_nodes : int
        Initial trapezoid nodes for circle integrals (doubled to converge).
    lattice_order : int
        Minimum total degree kept in truncated local lattice sums; raised
        automatically until the geometric tail is below 1e-16.
    tail_policy : {"doubling-check", "fixed"}
        Whether to compare against the product up to ``prime_cutoff / 2``.
    tail_tol : float
        Allowed relative change between the two cutoffs.
    disk_radius : float
        Largest admissible |shift| inside Euler products.
    """

    prime_cutoff: int = 10_000
    theta_nodes: int = 128
    lattice_order: int = 12
    tail_policy: str = "doubling-check"
    tail_tol: float = 1e-3
    disk_radius: float = 0.45

    def __post_init__(self):
        if self.prime_cutoff < 100:
            raise InvalidInput("prime_cutoff must be >= 100")
        n = self.theta_nodes
        if n < 64 or n & (n - 1):
            raise InvalidInput("theta_nodes must be a power of two >= 64")
        if self.tail_policy not in ("doubling-check", "fixed"):
            raise InvalidInput("tail_policy must be 'doubling-check' or 'fixed'")
        if not 0 < self.disk_radius < 0.5:
            raise InvalidInput("disk_radius must lie in (0, 1/2)")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ConjectureValue:
    """A conjectural main term with its numerical error budget."""

    value: complex
    error_budget: float
    details: dict = field(default_factory=dict, compare=False)

    def __complex__(self):
        return complex(self.value)


FAMILY_KINDS = ("ZetaT", "QuadraticPositive", "QuadraticNegative",
                "EllipticEvenTwists", "EllipticOddTwists")


@dataclass(frozen=True)
class FamilySpec:
    """Which family is averaged, and its sweep bound (T or X)."""

    kind: str
    sweep_bound: float

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidInput(f"unknown family {self.kind!r}")
        if not self.sweep_bound > 0:
            raise InvalidInput("sweep bound must be positive")
