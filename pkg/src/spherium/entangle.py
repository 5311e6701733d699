"""Linear-entropy entanglement of quasi-exact s-states, and (d, n) sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from . import chords, specfun
from .eigen import MAX_DIMENSION, SpheriumState, solve_states
from .errors import DomainError, SpheriumError
from .specfun import LN_2, LN_PI, ln_gamma

TRIPLET_NOTE = "spatial part symmetric: triplet value formal only"
PRODUCT_STATE_TOL = 1e-14


@dataclass(frozen=True)
class EntanglementReport:
    """Normalization, coordinate purity and the two spin-sector measures.

    ``xi_singlet = 1 - T`` applies to the symmetric spatial states built here
    (singlet spin part).  ``xi_triplet = 1 - 2T`` is reported for reference
    only, since a parallel-spin pair needs an antisymmetric spatial part.
    """

    state: SpheriumState
    N: float
    T: float
    xi_singlet: float
    xi_triplet: float
    product_state: bool = False
    note: str = TRIPLET_NOTE


def report_from_trace(state: SpheriumState, N: float, T: float) -> EntanglementReport:
    return EntanglementReport(
        state=state,
        N=N,
        T=T,
        xi_singlet=1.0 - T,
        xi_triplet=1.0 - 2.0 * T,
        product_state=abs(1.0 - T) <= PRODUCT_STATE_TOL,
    )


def entanglement(state: SpheriumState, tol: float = specfun.DEFAULT_SERIES_TOL) -> EntanglementReport:
    """Closed-form entanglement of a solved state."""
    N = chords.normalization(state)
    T = chords.trace_rho1_squared(state, tol=tol)
    return report_from_trace(state, N, T)


@dataclass(frozen=True)
class SweepRow:
    d: int
    n: int
    m: int | None
    R: float = math.nan
    E: float = math.nan
    xi: float = math.nan
    error: str | None = None


def _sweep_cell(d: int, n: int, tol: float, max_d: int) -> list[SweepRow]:
    try:
        states = solve_states(d, n, max_d=max_d)
        return [SweepRow(d, n, st.m, st.R, st.E, entanglement(st, tol=tol).xi_singlet) for st in states]
    except SpheriumError as exc:
        return [SweepRow(d, n, None, error=f"{type(exc).__name__}: {exc}")]


def sweep(
    d_range: Iterable[int],
    n_range: Iterable[int],
    tol: float = specfun.DEFAULT_SERIES_TOL,
    max_d: int = MAX_DIMENSION,
    workers: int | None = None,
    ground_only: bool = False,
) -> list[SweepRow]:
    """Every admissible (d, n, m) with its radius, energy and singlet xi.

    Rows are sorted by (d, n, m) regardless of ``workers``.  A cell that
    cannot be solved yields one row carrying ``error`` and the sweep goes on.
    """
    cells = [(d, n) for d in sorted(set(d_range)) for n in sorted(set(n_range))]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda c: _sweep_cell(c[0], c[1], tol, max_d), cells))
    else:
        blocks = [_sweep_cell(d, n, tol, max_d) for d, n in cells]
    rows = [row for block in blocks for row in block]
    if ground_only:
        rows = [r for r in rows if r.m in (0, None)]
    return sorted(rows, key=lambda r: (r.d, r.n, -1 if r.m is None else r.m))


def n1_integrals(d: int, R: float, tol: float = specfun.DEFAULT_SERIES_TOL) -> tuple[float, ...]:
    """``I_0 .. I_4``: integrals of 0..4 chord factors of the n = 1 cycle.

    Written out explicitly rather than through the general dispatcher so the
    n = 1 result is an independent route to the same number.
    """
    lg_half = ln_gamma(0.5 * d)
    lg_dm = ln_gamma(d - 0.5)
    lg_dp = ln_gamma(d + 0.5)
    i0 = math.exp(4 * (LN_2 + 0.5 * d * LN_PI - lg_half))
    i1 = math.exp((d + 3) * LN_2 + (2 * d - 0.5) * LN_PI - lg_dm - 2 * lg_half) * R
    i2 = math.exp((d + 1) * 2 * LN_2 + (2 * d - 1) * LN_PI - 2 * lg_dm) * R**2
    i3 = math.exp((3 * d + 1) * LN_2 + (2 * d - 1.5) * LN_PI + 2 * lg_half - 3 * lg_dm) * R**3
    plus = specfun.hyper_5f4_at_unity(((0.5,) * 4 + (d - 1.0,), (d + 0.5,) * 4), tol=tol)
    minus = specfun.hyper_5f4_at_unity(((-0.5,) * 4 + (d - 2.0,), (d - 0.5,) * 4), tol=tol)
    i4 = (
        math.exp((4 * d - 3) * LN_2 + (2 * d - 2) * LN_PI + 4 * (lg_half - lg_dp))
        * R**4
        * (plus + 8 * (d - 0.5) ** 4 * minus)
    )
    return i0, i1, i2, i3, i4


def n1_normalization(d: int, R: float) -> float:
    """``N_1`` for ``Psi = 1 + gamma u`` with ``gamma = 1/(d-2)``."""
    g = 1.0 / (d - 2)
    return 4 * math.pi**d * (
        (1 + 2 * g * g * R * R) / math.exp(2 * ln_gamma(0.5 * d))
        + 2**d * g * R / (math.sqrt(math.pi) * math.exp(ln_gamma(d - 0.5)))
    )


def n1_closed_form_xi(d: int, tol: float = specfun.DEFAULT_SERIES_TOL) -> float:
    """Singlet xi of the n = 1 ground state with ``R^2 = (2d-3)(d-2)/4``."""
    if d < 3:
        raise DomainError(f"d must be >= 3, got {d}")
    g = 1.0 / (d - 2)
    R = math.sqrt((2 * d - 3) * (d - 2) / 4.0)
    i0, i1, i2, i3, i4 = n1_integrals(d, R, tol=tol)
    T = (i0 + 4 * g * i1 + 6 * g**2 * i2 + 4 * g**3 * i3 + g**4 * i4) / n1_normalization(d, R) ** 2
    return 1.0 - T
