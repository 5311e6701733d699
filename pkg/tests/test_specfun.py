import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from spherium.errors import ConvergenceError, DomainError
from spherium.specfun import (
    HypergeometricSpec,
    gegenbauer,
    hyper_5f4_at_unity,
    ln_gamma,
    pochhammer,
    sphere_area,
)


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 0.0), (2.5, math.log(3 * math.sqrt(math.pi) / 4)), (10.0, math.log(362880))],
)
def test_ln_gamma_examples(x, expected):
    assert ln_gamma(x) == pytest.approx(expected, abs=1e-13)


def test_ln_gamma_half_integer_value():
    assert ln_gamma(2.5) == pytest.approx(0.2846828704, abs=1e-10)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_ln_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        ln_gamma(x)


@pytest.mark.parametrize("x", [0.5 + k for k in range(51)])
def test_gamma_recurrence(x):
    assert math.exp(ln_gamma(x + 1)) == pytest.approx(x * math.exp(ln_gamma(x)), rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=300.0))
def test_ln_gamma_matches_scipy(x):
    assert ln_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("a, k, expected", [(-0.5, 0, 1.0), (-0.5, 2, -0.25), (3.0, 3, 60.0)])
def test_pochhammer_examples(a, k, expected):
    assert pochhammer(a, k) == expected


@given(st.floats(min_value=0.01, max_value=40.0), st.integers(min_value=0, max_value=25))
def test_pochhammer_is_gamma_ratio(a, k):
    assert pochhammer(a, k) == pytest.approx(math.exp(ln_gamma(a + k) - ln_gamma(a)), rel=1e-12)


def test_pochhammer_rejects_negative_k():
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


def test_gegenbauer_examples():
    assert gegenbauer(0, 0.5, 0.3) == 1.0
    assert gegenbauer(1, 1.7, 0.3) == pytest.approx(2 * 1.7 * 0.3)
    assert gegenbauer(2, 0.5, 1.0) == pytest.approx(1.0)


@given(
    st.integers(min_value=0, max_value=15),
    st.sampled_from([0.5, 1.0, 1.5, 2.5, 4.0]),
    st.floats(min_value=-1.0, max_value=1.0),
)
def test_gegenbauer_matches_scipy(n, alpha, x):
    assert gegenbauer(n, alpha, x) == pytest.approx(special.eval_gegenbauer(n, alpha, x), rel=1e-11, abs=1e-11)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_gegenbauer_orthogonality(alpha):
    # in the angle variable the weight sin^(2 alpha) is smooth, so the rule is spectral
    t, w = np.polynomial.legendre.leggauss(64)
    theta = 0.5 * np.pi * (t + 1)
    x = np.cos(theta)
    weight = np.sin(theta) ** (2 * alpha)
    polys = [gegenbauer(n, alpha, x) for n in range(9)]
    for n in range(9):
        for m in range(n):
            assert abs(float(w @ (weight * polys[n] * polys[m]))) < 1e-10


def test_gegenbauer_norm_half_alpha():
    # alpha = 1/2 is Legendre: int P_n^2 = 2/(2n+1), exact under Gauss-Legendre
    x, w = np.polynomial.legendre.leggauss(32)
    for n in range(9):
        assert float(w @ gegenbauer(n, 0.5, x) ** 2) == pytest.approx(2 / (2 * n + 1), rel=1e-13)


def test_gegenbauer_accepts_arrays():
    x = np.linspace(-1, 1, 7)
    assert np.allclose(gegenbauer(3, 1.0, x), special.eval_gegenbauer(3, 1.0, x))


@pytest.mark.parametrize("d, expected", [(3, 4 * math.pi), (2, 2 * math.pi), (4, 2 * math.pi**2), (1, 2.0)])
def test_sphere_area(d, expected):
    assert sphere_area(d) == pytest.approx(expected, rel=1e-14)


def test_hyper_terminating_examples():
    assert hyper_5f4_at_unity(((0, 1, 2, 3, 4), (1, 2, 3, 4))) == 1.0
    assert hyper_5f4_at_unity(((-1, 1, 1, 1, 1), (2, 1, 1, 1))) == pytest.approx(0.5, abs=1e-15)


def test_hyper_spec_rejects_bad_lower():
    with pytest.raises(DomainError):
        HypergeometricSpec((0.5,) * 5, (1.0, 2.0, 0.0, 3.0))
    with pytest.raises(DomainError):
        HypergeometricSpec((0.5,) * 5, (1.0, 2.0, -2.0, 3.0))


def test_hyper_spec_rejects_divergent():
    with pytest.raises(DomainError):
        HypergeometricSpec((1.0,) * 5, (1.0, 1.0, 1.0, 1.5))


def test_hyper_spec_counts():
    with pytest.raises(DomainError):
        HypergeometricSpec((1.0,) * 4, (2.0,) * 4)


def test_hyper_iteration_cap_reports_last_term():
    with pytest.raises(ConvergenceError, match="term"):
        hyper_5f4_at_unity(((0.5,) * 5, (1.0, 1.0, 1.0, 1.6)), max_terms=50)


params = st.tuples(
    st.lists(st.floats(min_value=-2.5, max_value=3.0), min_size=5, max_size=5),
    st.lists(st.floats(min_value=0.5, max_value=6.0), min_size=4, max_size=4),
).filter(lambda p: sum(p[1]) - sum(p[0]) > 2.5)


@settings(max_examples=40, deadline=None)
@given(params)
def test_hyper_matches_mpmath(p):
    upper, lower = p
    ours = hyper_5f4_at_unity((upper, lower), tol=1e-16)
    ref = float(mpmath.hyper(upper, lower, 1))
    assert ours == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_hyper_tightening_tol_moves_by_less_than_last_term():
    spec = HypergeometricSpec((0.5, 0.5, 0.5, 0.5, 2.0), (3.5, 3.5, 3.5, 3.5))
    loose = hyper_5f4_at_unity(spec, tol=1e-8)
    tight = hyper_5f4_at_unity(spec, tol=1e-15)
    assert abs(tight - loose) <= 1e-8 * abs(loose) * 10
