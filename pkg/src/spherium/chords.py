"""Closed-form chord-power integrals over products of (d-1)-spheres.

Four points 1, 2, 1', 2' sit on the sphere of radius R.  The chords
r12, r12', r1'2, r1'2' form the cycle 1-2-1'-2'-1 and carry integer powers
``(q1, q2, q3, q4)``.  All integrals are over the solid angles of the four
points, so the all-zero pattern gives ``Omega_d**4``.

When at least one power vanishes the active chords form a forest and the
integral factorizes into one-center moments.  When all four are positive it
is a sum of two 5F4 series at unit argument.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specfun
from .eigen import SpheriumState
from .errors import DomainError
from .specfun import LN_2, LN_PI, ln_gamma, ln_sphere_area


@dataclass(frozen=True)
class ChordPattern:
    """Powers on chords (1,2), (1,2'), (1',2), (1',2'), in that order."""

    q1: int = 0
    q2: int = 0
    q3: int = 0
    q4: int = 0

    def __post_init__(self):
        for q in self:
            if q < 0 or int(q) != q:
                raise DomainError(f"chord powers must be nonnegative integers, got {tuple(self)}")

    def __iter__(self):
        return iter((self.q1, self.q2, self.q3, self.q4))

    @property
    def total(self) -> int:
        return self.q1 + self.q2 + self.q3 + self.q4

    @property
    def active(self) -> int:
        """Number of chords with a positive power."""
        return sum(1 for q in self if q > 0)

    def canonical(self) -> tuple[int, int, int, int]:
        """Sorted powers; the integral is symmetric in all four entries."""
        return tuple(sorted(self))


@dataclass(frozen=True)
class ChordIntegralValue:
    value: float
    pattern: ChordPattern
    d: int
    R: float


def _check_d(d: int):
    if d < 3:
        raise DomainError(f"chord integrals need d >= 3, got d={d}")


def _ln_chord_factor(d: int, q: int) -> float:
    """log of ``2^(d-1+q) pi^((d-1)/2) Gamma((d+q-1)/2) / Gamma(d-1+q/2)``.

    This is the one-center moment on a unit sphere divided by ``Omega_d``:
    the average over the second point of ``r12**q``, times ``Omega_d``.
    """
    return (
        (d - 1 + q) * LN_2
        + 0.5 * (d - 1) * LN_PI
        + ln_gamma(0.5 * (d + q - 1))
        - ln_gamma(d - 1 + 0.5 * q)
    )


def chord_moment(d: int, q: int, R: float = 1.0) -> float:
    """``int r12**q dOmega_1 dOmega_2`` over two points on the sphere.

    Equals ``2^(d+q) pi^(d-1/2) Gamma((d+q-1)/2) R^q / (Gamma(d/2) Gamma(d+q/2-1))``;
    at q = 0 this is ``Omega_d**2``.
    """
    _check_d(d)
    if q < 0:
        raise DomainError(f"q must be >= 0, got {q}")
    ln_val = (
        (d + q) * LN_2
        + (d - 0.5) * LN_PI
        + ln_gamma(0.5 * (d + q - 1))
        - ln_gamma(0.5 * d)
        - ln_gamma(d + 0.5 * q - 1)
    )
    return math.exp(ln_val) * R**q


def _ln_four_center_prefactor(d: int, qs) -> float:
    return sum(_ln_chord_factor(d, q) for q in qs)


def four_center_series(d: int, qs, tol: float = specfun.DEFAULT_SERIES_TOL) -> float:
    """All four powers positive, unit radius.

    With ``a_i = q_i/2`` and ``b_i = d - 1 + a_i`` the integral is

        prod_i C(q_i) * [ 5F4(-a_1..-a_4, d-2; b_1..b_4; 1)
                          + 2 prod(a_i)/prod(b_i) * 5F4(1-a_1..1-a_4, d-1; b_1+1..b_4+1; 1) ]

    where ``C(q)`` is the one-center factor of :func:`_ln_chord_factor`.
    Even powers make the series terminate.
    """
    a = [0.5 * q for q in qs]
    b = [d - 1 + x for x in a]
    first = specfun.hyper_5f4_at_unity(
        specfun.HypergeometricSpec(tuple(-x for x in a) + (d - 2.0,), tuple(b)), tol=tol
    )
    ln_weight = LN_2 + sum(math.log(x) for x in a) - sum(math.log(x) for x in b)
    second = specfun.hyper_5f4_at_unity(
        specfun.HypergeometricSpec(tuple(1.0 - x for x in a) + (d - 1.0,), tuple(x + 1.0 for x in b)),
        tol=tol,
    )
    return math.exp(_ln_four_center_prefactor(d, qs)) * (first + math.exp(ln_weight) * second)


@lru_cache(maxsize=None)
def _unit_integral(d: int, canonical: tuple[int, int, int, int], tol: float) -> float:
    active = [q for q in canonical if q > 0]
    ln_omega = ln_sphere_area(d)
    if len(active) < 4:
        # the active chords form a forest: integrate leaves one at a time
        ln_val = sum(_ln_chord_factor(d, q) for q in active) + (4 - len(active)) * ln_omega
        return math.exp(ln_val)
    return four_center_series(d, canonical, tol=tol)


def four_point_integral(
    d: int, pattern: ChordPattern | tuple, R: float = 1.0, tol: float = specfun.DEFAULT_SERIES_TOL
) -> ChordIntegralValue:
    """``int r12^q1 r12'^q2 r1'2^q3 r1'2'^q4 dOmega_1 dOmega_2 dOmega_1' dOmega_2'``.

    Dispatches on the number of positive powers: zero gives ``Omega_d**4``,
    one to three give the factorized one-, two- and three-center forms, four
    gives :func:`four_center_series`.  Values are cached per ``(d, sorted
    pattern)`` at unit radius and scaled by ``R**sum(q)``.
    """
    _check_d(d)
    if not isinstance(pattern, ChordPattern):
        pattern = ChordPattern(*pattern)
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    unit = _unit_integral(d, pattern.canonical(), tol)
    return ChordIntegralValue(unit * R**pattern.total, pattern, d, R)


def one_center(d: int, q: int, R: float = 1.0) -> float:
    """A single chord power integrated over all four points."""
    return four_point_integral(d, (q, 0, 0, 0), R).value


def normalization(state: SpheriumState) -> float:
    """``N = int |Psi|^2 dOmega_1 dOmega_2`` for an unnormalized state."""
    s = state.coeffs
    n = len(s) - 1
    return math.fsum(
        s[j] * s[k] * chord_moment(state.d, j + k, state.R) for j in range(n + 1) for k in range(n + 1)
    )


def trace_rho1_squared(state: SpheriumState, tol: float = specfun.DEFAULT_SERIES_TOL) -> float:
    """Coordinate purity ``Tr[(rho_1)^2]`` of the normalized state.

    Expands the product of the four wavefunction factors into chord powers
    and sums ``s_q1 s_q2 s_q3 s_q4 I(q1, q2, q3, q4)`` over all
    ``(n+1)**4`` tuples, divided by ``N**2``.
    """
    s = np.asarray(state.coeffs)
    n = len(s) - 1
    terms = []
    for qs in itertools.product(range(n + 1), repeat=4):
        weight = s[qs[0]] * s[qs[1]] * s[qs[2]] * s[qs[3]]
        if weight == 0.0:
            continue
        terms.append(weight * four_point_integral(state.d, qs, state.R, tol=tol).value)
    return math.fsum(terms) / normalization(state) ** 2
