"""Quasi-exact two-electron states on a (d-1)-sphere and their entanglement."""

from .chords import ChordPattern, chord_moment, four_point_integral, normalization, trace_rho1_squared
from .eigen import SpheriumState, StateSpec, eval_wavefunction, solve_state, solve_states
from .entangle import EntanglementReport, entanglement, n1_closed_form_xi, sweep
from .errors import ConvergenceError, DomainError, EmptySpectrumError, NumericalError, SpheriumError

__all__ = [
    "ChordPattern",
    "ConvergenceError",
    "DomainError",
    "EmptySpectrumError",
    "EntanglementReport",
    "NumericalError",
    "SpheriumError",
    "SpheriumState",
    "StateSpec",
    "chord_moment",
    "entanglement",
    "eval_wavefunction",
    "four_point_integral",
    "n1_closed_form_xi",
    "normalization",
    "solve_state",
    "solve_states",
    "sweep",
    "trace_rho1_squared",
]
