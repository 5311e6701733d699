"""Scalar special functions used by the closed-form chord integrals.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConvergenceError, DomainError

LN_PI = math.log(math.pi)
LN_2 = math.log(2.0)

DEFAULT_SERIES_TOL = 1e-15
DEFAULT_MAX_TERMS = 1_000_000


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)`` with ``(a)_0 = 1``."""
    if k < 0:
        raise DomainError(f"pochhammer requires k >= 0, got {k}")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def gegenbauer(n: int, alpha: float, x):
    """Gegenbauer polynomial ``C_n^alpha(x)`` by the three-term recurrence.

    ``x`` may be a scalar or a numpy array.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if alpha == 0:
        raise DomainError("alpha = 0 is the Chebyshev limit and is not supported")
    c_prev = x * 0 + 1.0
    if n == 0:
        return c_prev
    c = 2.0 * alpha * x
    for k in range(1, n):
        c_prev, c = c, (2.0 * (k + alpha) * x * c - (k + 2.0 * alpha - 1.0) * c_prev) / (k + 1)
    return c


def ln_sphere_area(d: int) -> float:
    """Log of the total solid angle of the unit sphere embedded in R^d."""
    if d < 1:
        raise DomainError(f"sphere dimension must be >= 1, got {d}")
    return LN_2 + 0.5 * d * LN_PI - ln_gamma(0.5 * d)


def sphere_area(d: int) -> float:
    """Total solid angle ``2 pi^(d/2) / Gamma(d/2)`` of the unit (d-1)-sphere.

    ``d = 1`` is accepted (the 0-sphere: two points, area 2) because the
    quadrature oracles need it for the innermost azimuthal factor at d = 3.
    """
    return math.exp(ln_sphere_area(d))


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameters of a 5F4 series evaluated at unit argument."""

    upper: tuple[float, float, float, float, float]
    lower: tuple[float, float, float, float]

    def __post_init__(self):
        upper = tuple(float(a) for a in self.upper)
        lower = tuple(float(b) for b in self.lower)
        if len(upper) != 5 or len(lower) != 4:
            raise DomainError("5F4 needs exactly 5 upper and 4 lower parameters")
        for b in lower:
            if b <= 0 and b == math.floor(b):
                raise DomainError(f"lower parameter {b} is zero or a negative integer")
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        if not self.terminates and self.margin <= 0:
            raise DomainError(
                f"5F4 at unity diverges: sum(lower) - sum(upper) = {self.margin} <= 0"
            )

    @property
    def margin(self) -> float:
        return sum(self.lower) - sum(self.upper)

    @property
    def terminates(self) -> bool:
        return any(a <= 0 and a == math.floor(a) for a in self.upper)


def hyper_5f4_at_unity(
    spec: HypergeometricSpec | Sequence[Sequence[float]],
    tol: float = DEFAULT_SERIES_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> float:
    """Sum ``5F4(a; b; 1)`` by term-ratio recursion.

    Stops when ``|term| < tol * |partial sum|`` or when the series terminates
    because an upper parameter is a non-positive integer.

    Parameters
    ----------
    spec : HypergeometricSpec or (upper, lower)
    tol : float
        Relative size of the last included term.
    max_terms : int
        Hard cap; exceeding it raises :class:`ConvergenceError`.
    """
    if not isinstance(spec, HypergeometricSpec):
        spec = HypergeometricSpec(tuple(spec[0]), tuple(spec[1]))
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    a1, a2, a3, a4, a5 = spec.upper
    b1, b2, b3, b4 = spec.lower
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        num = (a1 + k) * (a2 + k) * (a3 + k) * (a4 + k) * (a5 + k)
        if num == 0.0:
            return total
        term *= num / ((b1 + k) * (b2 + k) * (b3 + k) * (b4 + k) * (k + 1))
        total += term
        if abs(term) < tol * abs(total):
            return total
    raise ConvergenceError(
        f"5F4 did not converge in {max_terms} terms; last |term| = {abs(term):.3e}"
    )
