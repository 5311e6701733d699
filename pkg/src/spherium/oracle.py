"""Independent numerical checks of the closed forms.

Two kinds of oracle live here:

* Monte Carlo over independent uniform points on the sphere.  Work is split
  into fixed-size chunks, each drawing from its own Philox substream keyed by
  ``(seed, stream..., chunk index)``, and chunk moments are merged in chunk
  order.  Results are therefore bit-identical for any number of workers.
* Deterministic Gauss-Legendre quadrature in the relative angle, either of a
  single chord moment or of the zonal (Funk-Hecke) eigenvalues of a chord
  kernel.  The latter turns any cycle integral into a sum over harmonic
  degrees and never touches a hypergeometric series.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import chords
from .eigen import SpheriumState
from .errors import DomainError
from .specfun import gegenbauer, ln_sphere_area, sphere_area

CHUNK_SIZE = 2**16
DEFAULT_SEED = 20240611
PASS_Z = 3.0
FAIL_Z = 4.0
QUAD_RTOL = 1e-10
Z_FLOOR = 1e-12


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def z_score(self, target: float) -> float:
        scale = max(self.stderr, Z_FLOOR * abs(target))
        if scale == 0.0:
            return 0.0 if self.mean == target else math.inf
        return (self.mean - target) / scale


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for substream ``key`` of ``seed`` (counter-based Philox)."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *key])
    return np.random.Generator(np.random.Philox(ss))


def sample_sphere(d: int, R: float, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on the sphere of radius ``R`` in R^d (normalized Gaussians)."""
    if d < 2:
        raise DomainError(f"sample_sphere needs d >= 2, got {d}")
    shape = (1 if size is None else size, d)
    x = rng.standard_normal(shape)
    norms = np.linalg.norm(x, axis=1)
    bad = norms < 1e-150
    while np.any(bad):
        x[bad] = rng.standard_normal((int(bad.sum()), d))
        norms[bad] = np.linalg.norm(x[bad], axis=1)
        bad = norms < 1e-150
    x *= (R / norms)[:, None]
    return x[0] if size is None else x


class _Moments:
    """Running mean and co-moment matrix with an order-fixed pairwise merge."""

    def __init__(self, k: int):
        self.n = 0
        self.mean = np.zeros(k)
        self.comoment = np.zeros((k, k))

    @classmethod
    def from_block(cls, block: np.ndarray) -> "_Moments":
        m = cls(block.shape[1])
        m.n = block.shape[0]
        m.mean = block.mean(axis=0)
        centered = block - m.mean
        m.comoment = centered.T @ centered
        return m

    def merge(self, other: "_Moments") -> "_Moments":
        if other.n == 0:
            return self
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        out = _Moments(len(self.mean))
        out.n = n
        out.mean = self.mean + delta * (other.n / n)
        out.comoment = self.comoment + other.comoment + np.outer(delta, delta) * (self.n * other.n / n)
        return out

    @property
    def covariance(self) -> np.ndarray:
        return self.comoment / max(self.n - 1, 1)


def _chunk_sizes(samples: int, chunk: int) -> list[int]:
    full, rest = divmod(samples, chunk)
    return [chunk] * full + ([rest] if rest else [])


def _run_chunks(
    samples: int,
    seed: int,
    key: Sequence[int],
    block_fn: Callable[[np.random.Generator, int], np.ndarray],
    chunk: int = CHUNK_SIZE,
    workers: int | None = None,
) -> _Moments:
    sizes = _chunk_sizes(samples, chunk)

    def one(i: int) -> _Moments:
        return _Moments.from_block(block_fn(substream(seed, *key, i), sizes[i]))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    else:
        parts = [one(i) for i in range(len(sizes))]
    # balanced merge in index order: independent of how chunks were scheduled
    while len(parts) > 1:
        parts = [parts[i].merge(parts[i + 1]) if i + 1 < len(parts) else parts[i] for i in range(0, len(parts), 2)]
    return parts[0]


def _four_points(d: int, R: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Chord lengths r12, r12', r1'2, r1'2' for ``size`` random quadruples."""
    x1, x2, x1p, x2p = (sample_sphere(d, R, rng, size) for _ in range(4))
    return np.stack(
        [
            np.linalg.norm(x1 - x2, axis=1),
            np.linalg.norm(x1 - x2p, axis=1),
            np.linalg.norm(x1p - x2, axis=1),
            np.linalg.norm(x1p - x2p, axis=1),
        ]
    )


def mc_chord_patterns(
    d: int,
    patterns: Sequence[chords.ChordPattern | tuple],
    R: float = 1.0,
    samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    stream: Sequence[int] = (),
    chunk: int = CHUNK_SIZE,
    workers: int | None = None,
) -> list[MCEstimate]:
    """Monte Carlo estimates of several four-point chord integrals from shared samples."""
    if samples < 1:
        raise DomainError("need at least one sample")
    pats = [p if isinstance(p, chords.ChordPattern) else chords.ChordPattern(*p) for p in patterns]
    qmax = max((max(p) for p in pats), default=0)

    def block(rng, size):
        r = _four_points(d, R, rng, size)
        powers = [np.ones_like(r)]
        for _ in range(qmax):
            powers.append(powers[-1] * r)
        cols = []
        for p in pats:
            v = np.ones(size)
            for i, q in enumerate(p):
                if q:
                    v = v * powers[q][i]
            cols.append(v)
        return np.stack(cols, axis=1)

    mom = _run_chunks(samples, seed, (d, *stream), block, chunk, workers)
    omega4 = math.exp(4 * ln_sphere_area(d))
    var = np.diag(mom.covariance)
    return [
        MCEstimate(float(omega4 * mom.mean[i]), float(omega4 * math.sqrt(var[i] / mom.n)), samples, seed)
        for i in range(len(pats))
    ]


def mc_four_point(
    d: int,
    pattern: chords.ChordPattern | tuple,
    R: float = 1.0,
    samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    chunk: int = CHUNK_SIZE,
    workers: int | None = None,
) -> MCEstimate:
    """Monte Carlo estimate of ``int prod r^q dOmega^4`` for one chord pattern."""
    if samples < 10_000:
        raise DomainError(f"mc_four_point needs at least 1e4 samples, got {samples}")
    return mc_chord_patterns(d, [pattern], R, samples, seed, chunk=chunk, workers=workers)[0]


def mc_mean_chord_to_pole(d: int, R: float, samples: int, seed: int = DEFAULT_SEED) -> MCEstimate:
    """Mean distance from uniform points to the fixed pole ``R e_1``."""
    pole = np.zeros(d)
    pole[0] = R

    def block(rng, size):
        return np.linalg.norm(sample_sphere(d, R, rng, size) - pole, axis=1)[:, None]

    mom = _run_chunks(samples, seed, (d, 7), block)
    return MCEstimate(float(mom.mean[0]), float(math.sqrt(mom.covariance[0, 0] / mom.n)), samples, seed)


def mc_normalization(state: SpheriumState, samples: int = 1_000_000, seed: int = DEFAULT_SEED) -> MCEstimate:
    """Monte Carlo ``int Psi(r12)^2 dOmega_1 dOmega_2`` from independent point pairs."""
    coeffs = np.asarray(state.coeffs)

    def block(rng, size):
        u = np.linalg.norm(sample_sphere(state.d, state.R, rng, size) - sample_sphere(state.d, state.R, rng, size), axis=1)
        acc = np.zeros_like(u)
        for c in coeffs[::-1]:
            acc = acc * u + c
        return (acc * acc)[:, None]

    mom = _run_chunks(samples, seed, (state.d, state.n, state.m, 13), block)
    omega2 = math.exp(2 * ln_sphere_area(state.d))
    return MCEstimate(
        float(omega2 * mom.mean[0]), float(omega2 * math.sqrt(mom.covariance[0, 0] / mom.n)), samples, seed
    )


def mc_purity(
    state: SpheriumState,
    samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    chunk: int = CHUNK_SIZE,
    workers: int | None = None,
) -> MCEstimate:
    """Monte Carlo ``Tr[(rho_1)^2]`` of a state, normalization included.

    Estimates ``E[Psi(r12) Psi(r12') Psi(r1'2) Psi(r1'2')] / E[Psi(r)^2]**2``
    from the same quadruples; the standard error is the delta-method one for
    this ratio.
    """
    coeffs = np.asarray(state.coeffs)

    def psi(u):
        acc = np.zeros_like(u)
        for c in coeffs[::-1]:
            acc = acc * u + c
        return acc

    def block(rng, size):
        p = psi(_four_points(state.d, state.R, rng, size))
        num = p[0] * p[1] * p[2] * p[3]
        den = 0.5 * (p[0] ** 2 + p[3] ** 2)
        return np.stack([num, den], axis=1)

    mom = _run_chunks(samples, seed, (state.d, state.n, state.m, 11), block, chunk, workers)
    a, b = mom.mean
    grad = np.array([1.0 / b**2, -2.0 * a / b**3])
    var = float(grad @ mom.covariance @ grad) / mom.n
    return MCEstimate(float(a / b**2), math.sqrt(max(var, 0.0)), samples, seed)


def _angle_rule(nodes: int):
    if nodes < 2:
        raise DomainError("need at least 2 quadrature nodes")
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = 0.5 * math.pi * (x + 1.0)
    return theta, 0.5 * math.pi * w


def quad_chord_moment(d: int, q: int, R: float = 1.0, nodes: int = 128) -> float:
    """``Omega_d Omega_(d-1) int_0^pi (2R sin(theta/2))^q sin^(d-2)(theta) dtheta``."""
    if d < 3:
        raise DomainError(f"d must be >= 3, got {d}")
    if nodes < 32:
        raise DomainError(f"quad_chord_moment needs at least 32 nodes, got {nodes}")
    theta, w = _angle_rule(nodes)
    f = (2.0 * R * np.sin(0.5 * theta)) ** q * np.sin(theta) ** (d - 2)
    return sphere_area(d) * sphere_area(d - 1) * float(w @ f)


def harmonic_dimension(d: int, n: int) -> int:
    """Number of independent degree-n spherical harmonics on the (d-1)-sphere."""
    return math.comb(n + d - 1, d - 1) - (math.comb(n + d - 3, d - 1) if n >= 2 else 0)


def zonal_eigenvalues(kernel: Callable[[np.ndarray], np.ndarray], d: int, R: float, n_max: int, nodes: int) -> np.ndarray:
    """Funk-Hecke eigenvalues ``mu_0..mu_n_max`` of ``f(|x - y|)`` on the sphere.

    ``mu_n = Omega_(d-1) int_0^pi f(2R sin(t/2)) C_n(cos t)/C_n(1) sin^(d-2) t dt``
    with ``C_n`` the Gegenbauer polynomial of index ``d/2 - 1``.
    """
    theta, w = _angle_rule(nodes)
    alpha = 0.5 * d - 1.0
    fw = kernel(2.0 * R * np.sin(0.5 * theta)) * np.sin(theta) ** (d - 2) * w
    cos_t = np.cos(theta)
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        out[n] = float(fw @ gegenbauer(n, alpha, cos_t)) / gegenbauer(n, alpha, 1.0)
    return sphere_area(d - 1) * out


def gegenbauer_four_point(d: int, pattern, R: float = 1.0, n_max: int = 80, nodes: int = 400) -> float:
    """Cycle integral as ``sum_n dim_n prod_i mu_n(r^q_i)`` (trace of four zonal operators)."""
    pattern = tuple(pattern)
    mus = [zonal_eigenvalues(lambda u, q=q: u**q, d, R, n_max, nodes) for q in pattern]
    dims = np.array([harmonic_dimension(d, n) for n in range(n_max + 1)], dtype=float)
    return math.fsum(dims * mus[0] * mus[1] * mus[2] * mus[3])


def gegenbauer_purity(state: SpheriumState, n_max: int = 80, nodes: int = 400) -> tuple[float, float]:
    """``(T, N)`` for a state from the zonal eigenvalues of its wavefunction.

    The reduced density operator has eigenvalues ``mu_n**2 / N`` with
    multiplicity ``dim_n``, hence ``T = sum dim_n mu_n**4 / N**2``.  ``N`` is
    taken from a separate 1-D quadrature of ``Psi**2``.
    """
    coeffs = np.asarray(state.coeffs)

    def psi(u):
        acc = np.zeros_like(u)
        for c in coeffs[::-1]:
            acc = acc * u + c
        return acc

    mu = zonal_eigenvalues(psi, state.d, state.R, n_max, nodes)
    dims = np.array([harmonic_dimension(state.d, n) for n in range(n_max + 1)], dtype=float)
    theta, w = _angle_rule(nodes)
    N = (
        sphere_area(state.d)
        * sphere_area(state.d - 1)
        * float(w @ (psi(2.0 * state.R * np.sin(0.5 * theta)) ** 2 * np.sin(theta) ** (state.d - 2)))
    )
    return math.fsum(dims * mu**4) / N**2, N


# --------------------------------------------------------------------------- suite


def representative_patterns(q_max: int) -> list[tuple[int, int, int, int]]:
    """One pattern for each of the 16 zero/non-zero masks, plus extra four-center ones.

    Active entries cycle through ``1..q_max`` with a mask-dependent offset so
    every power up to ``q_max`` appears.
    """
    if q_max < 1:
        return [(0, 0, 0, 0)]
    out = []
    for mask in range(16):
        active = [i for i in range(4) if mask >> i & 1]
        q = [0, 0, 0, 0]
        for j, i in enumerate(active):
            q[i] = (mask + j) % q_max + 1
        out.append(tuple(q))
    for extra in [(1, 1, 1, 1), (q_max,) * 4, (2, 1, 1, 1) if q_max >= 2 else (1, 1, 1, 1)]:
        if extra not in out:
            out.append(extra)
    return out


@dataclass
class VerificationCase:
    kind: str
    d: int
    label: str
    analytic: float
    estimate: float
    stderr: float | None
    score: float
    status: str

    def line(self) -> str:
        if self.kind == "quad":
            return f"{self.status:4} quad d={self.d} {self.label:<14} rel_err={self.score:.2e}"
        return f"{self.status:4} mc   d={self.d} {self.label:<14} z={self.score:+.2f}"


@dataclass
class VerificationReport:
    cases: list[VerificationCase] = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[VerificationCase]:
        return [c for c in self.cases if c.status == "FAIL"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def within(self, z: float) -> bool:
        return all(abs(c.score) <= z for c in self.cases if c.kind == "mc")

    def to_dict(self) -> dict:
        return {
            "settings": self.settings,
            "passed": self.passed,
            "cases": [asdict(c) for c in self.cases],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render(self) -> str:
        lines = [c.line() for c in self.cases]
        n_warn = sum(c.status == "WARN" for c in self.cases)
        lines.append(
            f"{len(self.cases)} cases, {len(self.failures)} failed, {n_warn} warned: "
            + ("PASS" if self.passed else "FAIL")
        )
        return "\n".join(lines)


def _mc_status(z: float) -> str:
    if abs(z) > FAIL_Z:
        return "FAIL"
    if abs(z) > PASS_Z:
        return "WARN"
    return "ok"


def verify_suite(
    d_range: Iterable[int] = range(3, 7),
    q_max: int = 3,
    samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    four_center_samples: int | None = None,
    quad_nodes: int = 128,
    closed_form: Callable[[int, tuple, float], float] | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """Compare every closed form against quadrature and Monte Carlo.

    Quadrature cases fail above ``1e-10`` relative error.  Monte Carlo cases
    pass within 3 standard errors, warn up to 4 and fail beyond.  Errors in
    individual cases are recorded, never raised.

    ``closed_form(d, pattern, R)`` substitutes the four-point closed form;
    it exists so the suite's sensitivity can be tested.
    """
    if closed_form is None:
        def closed_form(d, pattern, R):
            return chords.four_point_integral(d, pattern, R).value
    four_center_samples = four_center_samples or samples
    report = VerificationReport(
        settings={
            "d": list(d_range),
            "q_max": q_max,
            "samples": samples,
            "four_center_samples": four_center_samples,
            "seed": seed,
            "quad_nodes": quad_nodes,
        }
    )
    for d in report.settings["d"]:
        for q in range(q_max + 1):
            try:
                exact = chords.chord_moment(d, q)
                approx = quad_chord_moment(d, q, 1.0, quad_nodes)
                rel = abs(approx - exact) / abs(exact)
                status = "ok" if rel <= QUAD_RTOL else "FAIL"
            except Exception as exc:  # noqa: BLE001 - aggregate, never abort
                exact = approx = rel = math.nan
                status = "FAIL"
                q = f"{q} ({type(exc).__name__})"
            report.cases.append(VerificationCase("quad", d, f"q={q}", exact, approx, None, rel, status))
        patterns = representative_patterns(q_max)
        groups = [
            ([p for p in patterns if min(p) == 0], samples, 0),
            ([p for p in patterns if min(p) > 0], four_center_samples, 1),
        ]
        for pats, n_samples, tag in groups:
            if not pats:
                continue
            try:
                estimates = mc_chord_patterns(d, pats, 1.0, n_samples, seed, stream=(tag,), workers=workers)
            except Exception as exc:  # noqa: BLE001
                for p in pats:
                    label = f"{p} ({type(exc).__name__})"
                    report.cases.append(VerificationCase("mc", d, label, math.nan, math.nan, None, math.inf, "FAIL"))
                continue
            for p, est in zip(pats, estimates):
                try:
                    exact = closed_form(d, p, 1.0)
                    z = est.z_score(exact)
                except Exception:  # noqa: BLE001
                    exact, z = math.nan, math.inf
                report.cases.append(
                    VerificationCase("mc", d, str(p), exact, est.mean, est.stderr, z, _mc_status(z))
                )
    return report
