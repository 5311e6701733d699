"""Quasi-exact s-states of two electrons on a (d-1)-sphere.

An s-state depends only on the chord length ``u = r12`` between the two
electrons and, at the special radii, is the polynomial

    Psi(u) = sum_k s_k u**k,   k = 0..n,

with ``s_0 = 1``, ``s_1 = 1/(d-2)`` and

    s_{k+2} = (s_{k+1} + [k(k+2d-4)/(4R^2) - E] s_k) / ((k+2)(k+d-1)).

The series truncates at degree ``n`` when ``s_{n+1}(E) = 0`` and
``R^2 E = (n/2)(n/2 + d - 2)``.  Atomic units throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .errors import DomainError, EmptySpectrumError, NumericalError

MAX_DIMENSION = 30
ZERO_SCAN_POINTS = 10_000


@dataclass(frozen=True)
class StateSpec:
    """Quantum numbers of one quasi-exact s-state."""

    d: int
    n: int
    m: int = 0

    def __post_init__(self):
        if self.d < 3:
            raise DomainError(f"d must be >= 3 (s_1 = 1/(d-2) is singular at d=2), got d={self.d}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got n={self.n}")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got m={self.m}")


@dataclass(frozen=True)
class SpheriumState:
    """A solved state: energy (hartree), radius (bohr) and coefficients s_0..s_n."""

    spec: StateSpec
    E: float
    R: float
    coeffs: tuple[float, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def gamma(self) -> float:
        return self.coeffs[1]


def radius_energy_product(d: int, n: int) -> float:
    """The constant ``R^2 E = (n/2)(n/2 + d - 2)``."""
    return 0.5 * n * (0.5 * n + d - 2)


def _check_dimension(d: int, n: int, max_d: int):
    StateSpec(d, n)
    if d > max_d:
        raise DomainError(f"d={d} exceeds the configured cap {max_d}")


def energy_polynomial(d: int, n: int) -> np.ndarray:
    """Coefficients (ascending powers of E) of ``s_{n+1}(E)``.

    ``1/(4R^2)`` is eliminated with ``R^2 E = (n/2)(n/2+d-2)``, so each
    coefficient of the recurrence becomes a polynomial in E.  The result has
    degree ``(n+1)//2``.
    """
    StateSpec(d, n)
    scale = n * (n + 2 * d - 4)
    s = [np.array([1.0]), np.array([1.0 / (d - 2)])]
    for k in range(n):
        c_k = k * (k + 2 * d - 4) / scale - 1.0
        nxt = P.polyadd(s[k + 1], P.polymul(s[k], [0.0, c_k])) / ((k + 2) * (k + d - 1))
        s.append(nxt)
    return P.polytrim(s[n + 1], tol=0.0)


def recurrence_coefficients(d: int, n: int, E: float, R: float, extra: int = 0) -> np.ndarray:
    """``s_0 .. s_{n+extra}`` from the forward recurrence at fixed (E, R)."""
    s = np.zeros(n + 1 + extra)
    s[0] = 1.0
    if len(s) > 1:
        s[1] = 1.0 / (d - 2)
    inv4r2 = 1.0 / (4.0 * R * R)
    for k in range(len(s) - 2):
        s[k + 2] = (s[k + 1] + (k * (k + 2 * d - 4) * inv4r2 - E) * s[k]) / ((k + 2) * (k + d - 1))
    return s


def coefficients(state: SpheriumState) -> np.ndarray:
    """Recompute ``(s_0, ..., s_n)`` for a solved state."""
    return recurrence_coefficients(state.d, state.n, state.E, state.R)


def _horner(coeffs: Sequence[float], u):
    acc = u * 0.0
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def _check_chord(R: float, u):
    u_arr = np.asarray(u, dtype=float)
    slack = 1e-12 * 2.0 * R
    if np.any(u_arr < -slack) or np.any(u_arr > 2.0 * R + slack):
        raise DomainError(f"chord length must lie in [0, 2R] = [0, {2 * R:.6g}]")


def eval_wavefunction(state: SpheriumState, u):
    """Unnormalized ``Psi(u)`` for chord length(s) ``u`` in ``[0, 2R]``."""
    _check_chord(state.R, u)
    return _horner(state.coeffs, np.asarray(u, dtype=float) if np.ndim(u) else float(u))


def _derivative_coeffs(coeffs: Sequence[float], order: int = 1) -> np.ndarray:
    return P.polyder(np.asarray(coeffs, dtype=float), order) if len(coeffs) > order else np.zeros(1)


def unit_vector(angles: Sequence[float]) -> np.ndarray:
    """Point on the unit (d-1)-sphere from hyperspherical angles.

    ``angles = (theta_1, ..., theta_{d-2}, phi)`` so ``len(angles) = d - 1``;
    for d = 3 this is the usual ``(theta, phi)``.
    """
    angles = list(angles)
    if len(angles) < 1:
        raise DomainError("need at least one angle")
    *thetas, phi = angles
    x = []
    sin_prod = 1.0
    for th in thetas:
        x.append(sin_prod * math.cos(th))
        sin_prod *= math.sin(th)
    x.append(sin_prod * math.cos(phi))
    x.append(sin_prod * math.sin(phi))
    return np.array(x)


def chord_from_angles(R: float, angles1: Sequence[float], angles2: Sequence[float]) -> float:
    """Chord length ``R sqrt(2(1 - cos alpha))`` between two angular positions."""
    if len(angles1) != len(angles2):
        raise DomainError("both electrons need the same number of angles")
    cos_alpha = float(np.clip(unit_vector(angles1) @ unit_vector(angles2), -1.0, 1.0))
    return R * math.sqrt(2.0 * (1.0 - cos_alpha))


def eval_wavefunction_angles(state: SpheriumState, angles1: Sequence[float], angles2: Sequence[float]) -> float:
    """``Psi`` at two electron positions given as hyperspherical angles (d-1 each)."""
    if len(angles1) != state.d - 1:
        raise DomainError(f"d={state.d} needs {state.d - 1} angles per electron, got {len(angles1)}")
    return float(eval_wavefunction(state, chord_from_angles(state.R, angles1, angles2)))


def ode_residual(state: SpheriumState, u):
    """Residual of the radial s-state equation at ``0 < u < 2R``.

    Uses the first-derivative coefficient ``u(2d-3)/(4R^2) - (d-2)/u``, the
    form for which the recurrence above produces exact eigenfunctions.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u >= 2 * state.R):
        raise DomainError("ode_residual needs 0 < u < 2R")
    d, R, E = state.d, state.R, state.E
    psi = _horner(state.coeffs, u)
    dpsi = _horner(_derivative_coeffs(state.coeffs, 1), u)
    d2psi = _horner(_derivative_coeffs(state.coeffs, 2), u)
    four_r2 = 4.0 * R * R
    return (
        (u * u / four_r2 - 1.0) * d2psi
        + (u * (2 * d - 3) / four_r2 - (d - 2) / u) * dpsi
        + psi / u
        - E * psi
    )


def wavefunction_zeros(coeffs: Sequence[float], R: float) -> list[float]:
    """Zeros of ``Psi`` in the open interval (0, 2R).

    Sign changes on a uniform grid are bracketed and refined with Brent's
    method.  A zero where ``Psi'`` also vanishes is a multiple root, which no
    quasi-exact state is expected to have; it raises :class:`NumericalError`.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    grid = np.linspace(0.0, 2.0 * R, ZERO_SCAN_POINTS + 1)[1:-1]
    vals = _horner(coeffs, grid)
    scale = np.max(np.abs(vals))
    if np.any(vals == 0.0):
        raise NumericalError("wavefunction vanishes exactly on a scan point")
    dcoeffs = _derivative_coeffs(coeffs, 1)
    zeros = []
    for i in np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]:
        root = brentq(lambda x: _horner(coeffs, x), grid[i], grid[i + 1], xtol=1e-14 * R, rtol=1e-15)
        if abs(_horner(dcoeffs, root)) * R < 1e-10 * scale:
            raise NumericalError(f"multiple zero of the wavefunction near u={root:.6g}")
        zeros.append(root)
    return zeros


def _newton_polish(poly: np.ndarray, x: float, iters: int = 8) -> float:
    dpoly = P.polyder(poly)
    for _ in range(iters):
        f = P.polyval(x, poly)
        df = P.polyval(x, dpoly)
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) <= 4e-16 * abs(x):
            break
    return x


def energy_roots(d: int, n: int) -> list[float]:
    """Admissible energies: real positive roots of ``s_{n+1}(E)``, ascending."""
    poly = energy_polynomial(d, n)
    if len(poly) < 2:
        return []
    raw = P.polyroots(poly)
    out = []
    for r in raw:
        if abs(r.imag) > 1e-8 * max(1.0, abs(r.real)):
            continue
        e = _newton_polish(poly, float(r.real))
        if e > 0:
            out.append(e)
    return sorted(out)


def solve_states(d: int, n: int, max_d: int = MAX_DIMENSION) -> list[SpheriumState]:
    """All quasi-exact s-states for ``(d, n)``; list index equals node count m."""
    _check_dimension(d, n, max_d)
    roots = energy_roots(d, n)
    if not roots:
        raise EmptySpectrumError(f"no positive real energy root for d={d}, n={n}")
    c = radius_energy_product(d, n)
    states = []
    for E in roots:
        R = math.sqrt(c / E)
        s = recurrence_coefficients(d, n, E, R, extra=1)
        if abs(s[-1]) > 1e-9 * np.max(np.abs(s[:-1])):
            raise NumericalError(f"s_(n+1) = {s[-1]:.3e} does not vanish for d={d}, n={n}, E={E}")
        m = len(wavefunction_zeros(s[:-1], R))
        states.append(SpheriumState(StateSpec(d, n, m), E, R, tuple(float(x) for x in s[:-1])))
    states.sort(key=lambda st: st.m)
    if [st.m for st in states] != list(range(len(states))):
        raise NumericalError(
            f"node counts {[st.m for st in states]} for d={d}, n={n} are not 0..{len(states) - 1}"
        )
    return states


def solve_state(d: int, n: int, m: int = 0, max_d: int = MAX_DIMENSION) -> SpheriumState:
    """The single state ``(d, n, m)``."""
    StateSpec(d, n, m)
    states = solve_states(d, n, max_d=max_d)
    if m >= len(states):
        raise DomainError(f"(d={d}, n={n}) has {len(states)} state(s); m={m} is not admissible")
    return states[m]


def closed_form_s2(d: int) -> float:
    """Closed-form ``s_2`` of the n = 2 ground state."""
    return (1 - 2 * d) / (-8 * d**3 + 34 * d**2 - 46 * d + 20)


def closed_form_s3(d: int) -> float:
    """Closed-form ``s_3`` of the n = 3 ground state (m = 0 root)."""
    root = math.sqrt((d * (d * (64 * (d - 2) * d + 169) - 78) + 9) / (d**2 * (d * (3 - 2 * d) + 2) ** 2))
    return (
        -5520 / (d - 2) ** 2
        - 5400 / (d - 1)
        + 1600 / (1 - 2 * d)
        + 2393 / (d - 2)
        - 4050 / d**2
        + 24975 / d
        - 42336 / (2 * d + 1)
        + 900 * (d * (14 * d - 23) + 6) * root / ((d - 2) * (d - 1) * d * (2 * d - 1))
    ) / 48600
