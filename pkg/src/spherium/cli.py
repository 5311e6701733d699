"""Command-line entry point: ``spherium {state,reproduce,sweep,wavegrid,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 numerical failure.  Tables are written as LF-terminated CSV (or JSON with
the same field names) with 6 significant figures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import chords, eigen, entangle, oracle, specfun
from .errors import ConvergenceError, DomainError, NumericalError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

TABLE_D = range(3, 7)
TABLE_N = range(1, 4)
FIG_DEFAULTS = {2: (3, 6), 4: (6, 3), 5: (20, 1), 6: (6, 3)}


@dataclass(frozen=True)
class Settings:
    series_tol: float = specfun.DEFAULT_SERIES_TOL
    quad_nodes: int = 128
    seed: int = oracle.DEFAULT_SEED
    digits: int = 6


def _env(name: str, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise DomainError(f"cannot parse {name}={raw!r}") from None


def resolve_settings(args: argparse.Namespace) -> Settings:
    """Flags beat environment variables, which beat built-in defaults."""

    def pick(flag, env_name, cast, default):
        value = getattr(args, flag, None)
        return value if value is not None else _env(env_name, cast, default)

    base = Settings()
    return Settings(
        series_tol=pick("series_tol", "SPHERIUM_SERIES_TOL", float, base.series_tol),
        quad_nodes=pick("quad_nodes", "SPHERIUM_QUAD_NODES", int, base.quad_nodes),
        seed=pick("seed", "SPHERIUM_MC_SEED", int, base.seed),
        digits=args.digits if getattr(args, "digits", None) is not None else base.digits,
    )


def _fmt(value, digits: int):
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return "" if value is None else str(value)


def _jsonable(value, digits: int):
    if isinstance(value, (float, np.floating)):
        v = float(f"{float(value):.{digits}g}")
        return v if math.isfinite(v) else None
    return value


def render(rows: list[dict], fmt: str, digits: int) -> str:
    if fmt == "json":
        data = [{k: _jsonable(v, digits) for k, v in row.items()} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    fields: list[str] = []
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v, digits) for k, v in row.items()})
    return buf.getvalue()


def emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def state_row(state: eigen.SpheriumState, settings: Settings, with_coeffs: bool = True) -> dict:
    rep = entangle.entanglement(state, tol=settings.series_tol)
    row = {"d": state.d, "n": state.n, "m": state.m, "R": state.R, "E": state.E, "xi": rep.xi_singlet}
    if with_coeffs:
        row.update({"N": rep.N, "T": rep.T})
        row.update({f"s{k}": c for k, c in enumerate(state.coeffs)})
    return row


def cmd_state(args, settings: Settings) -> int:
    state = eigen.solve_state(args.d, args.n, args.m)
    emit(render([state_row(state, settings)], args.format, settings.digits), None)
    return EXIT_OK


def results_table(settings: Settings) -> list[dict]:
    return [
        state_row(eigen.solve_state(d, n), settings, with_coeffs=False) for d in TABLE_D for n in TABLE_N
    ]


def coefficients_table() -> list[dict]:
    rows = []
    for d in TABLE_D:
        row: dict = {"d": d, "s0": 1.0, "s1": 1.0 / (d - 2)}
        # each s_k is reported from the degree-k ground state
        row["s2"] = eigen.solve_state(d, 2).coeffs[2]
        row["s3"] = eigen.solve_state(d, 3).coeffs[3]
        rows.append(row)
    return rows


def groundstate_table() -> list[dict]:
    rows = []
    for d in TABLE_D:
        delta, gamma = 2 * d - 3, 1.0 / (d - 2)
        rows.append(
            {
                "d": d,
                "n": 1,
                "m": 0,
                "state": "1S",
                "configuration": "s^2",
                "delta_expr": "2d-3",
                "gamma_expr": "1/(d-2)",
                "delta": delta,
                "gamma": gamma,
                "R": math.sqrt(delta / (4 * gamma)),
                "E": gamma,
            }
        )
    return rows


def cmd_reproduce(args, settings: Settings) -> int:
    if args.table == "results":
        rows = results_table(settings)
    elif args.table == "coefficients":
        rows = coefficients_table()
    else:
        rows = groundstate_table()
    emit(render(rows, args.format, settings.digits), args.out)
    return EXIT_OK


def _warning_row(series: str, row: entangle.SweepRow) -> dict:
    return {"x": None, "y": None, "series": series, "warning": row.error}


def figure_rows(fig: int, d_max: int, n_max: int, settings: Settings) -> list[dict]:
    """Figure datasets as (x, y, series) rows; unsolvable cells become warning rows."""
    tol = settings.series_tol
    rows: list[dict] = []
    if fig == 5:
        for d in range(3, d_max + 1):
            rows.append({"x": d, "y": entangle.n1_closed_form_xi(d, tol=tol), "series": "n=1"})
        return rows
    d_values = [3] if fig == 2 else range(3, d_max + 1)
    cells = entangle.sweep(d_values, range(1, n_max + 1), tol=tol, ground_only=True)
    for r in cells:
        series = f"n={r.n}" if fig == 4 else f"d={r.d}"
        if r.error:
            rows.append(_warning_row(series, r))
            continue
        x = {2: r.R, 4: r.d, 6: r.E}[fig]
        rows.append({"x": x, "y": r.xi, "series": series})
    if fig == 4:
        rows.sort(key=lambda r: (r["series"], r["x"] if isinstance(r["x"], int) else math.inf))
    return rows


def cmd_sweep(args, settings: Settings) -> int:
    d_default, n_default = FIG_DEFAULTS[args.fig]
    d_max = args.d_max if args.d_max is not None else d_default
    n_max = args.n_max if args.n_max is not None else n_default
    if d_max < 3 or n_max < 1:
        raise DomainError("--d-max must be >= 3 and --n-max >= 1")
    rows = figure_rows(args.fig, d_max, n_max, settings)
    emit(render(rows, args.format, settings.digits), args.out)
    return EXIT_OK


def wavegrid_rows(state: eigen.SpheriumState, theta2: float, phi2: float, res: int) -> list[dict]:
    """Normalized ``psi(theta1, phi1 | theta2, phi2)`` on a res x res grid (d = 3)."""
    scale = 1.0 / (state.R ** (state.d - 1) * math.sqrt(chords.normalization(state)))
    thetas = np.linspace(0.0, math.pi, res)
    phis = np.linspace(0.0, 2.0 * math.pi, res)
    p2 = eigen.unit_vector((theta2, phi2))
    rows = []
    for th in thetas:
        for ph in phis:
            cos_a = float(np.clip(eigen.unit_vector((th, ph)) @ p2, -1.0, 1.0))
            u = state.R * math.sqrt(2.0 * (1.0 - cos_a))
            rows.append({"theta1": th, "phi1": ph, "psi": scale * eigen.eval_wavefunction(state, u)})
    return rows


def cmd_wavegrid(args, settings: Settings) -> int:
    if args.d != 3:
        raise DomainError(f"wavegrid is defined for d=3 only, got d={args.d}")
    if args.res < 2:
        raise DomainError("--res must be >= 2")
    state = eigen.solve_state(args.d, args.n, args.m)
    rows = wavegrid_rows(state, args.theta2, args.phi2, args.res)
    emit(render(rows, "csv", settings.digits), args.out)
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    closed_form = None
    if args.corrupt_four_center is not None:
        factor = args.corrupt_four_center

        def closed_form(d, pattern, R):
            value = chords.four_point_integral(d, pattern, R, tol=settings.series_tol).value
            return value * factor if min(pattern) > 0 else value

    report = oracle.verify_suite(
        d_range=range(3, args.d_max + 1),
        q_max=args.q_max,
        samples=args.samples,
        seed=settings.seed,
        four_center_samples=args.four_center_samples,
        quad_nodes=settings.quad_nodes,
        closed_form=closed_form,
    )
    sys.stdout.write(report.render() + "\n")
    for case in report.failures:
        sys.stderr.write(f"failing pattern: d={case.d} {case.label}\n")
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8", newline="\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spherium", description=__doc__.splitlines()[0])
    parser.add_argument("--series-tol", type=float, help="5F4 truncation tolerance (env SPHERIUM_SERIES_TOL)")
    parser.add_argument("--quad-nodes", type=int, help="quadrature nodes (env SPHERIUM_QUAD_NODES)")
    parser.add_argument("--digits", type=int, help="significant figures in output (default 6)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="solve one state and report its entanglement")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("reproduce", help="emit a published table")
    p.add_argument("--table", choices=("results", "coefficients", "groundstate"), default="results")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="emit a figure dataset as x,y,series")
    p.add_argument("--fig", type=int, choices=sorted(FIG_DEFAULTS), required=True)
    p.add_argument("--d-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wavegrid", help="normalized wavefunction over electron 1's angles")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--theta2", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.add_argument("--res", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_wavegrid)

    p = sub.add_parser("verify", help="cross-check closed forms against quadrature and Monte Carlo")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--four-center-samples", type=int)
    p.add_argument("--seed", type=int, help="MC seed (env SPHERIUM_MC_SEED)")
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--q-max", type=int, default=3)
    p.add_argument("--json", help="also write the JSON report here")
    p.add_argument("--corrupt-four-center", type=float, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        return args.func(args, settings)
    except DomainError as exc:
        sys.stderr.write(f"spherium: error: {exc}\n")
        return EXIT_DOMAIN
    except (ConvergenceError, NumericalError) as exc:
        sys.stderr.write(f"spherium: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
