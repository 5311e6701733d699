"""Monte Carlo purity against the closed form and the tabulated xi values.

For each ground state with n = 2, 3 this prints the closed-form xi, a Monte
Carlo estimate with its standard error, and the tabulated value with its z.
It then recomputes xi with the four-center upper parameters frozen at -1/2
and +1/2 and the second-series weight frozen at 1/(8 prod b) (all correct
only when every power is 1), which reproduces the
tabulated n = 2 entries.  Using s2 from the n = 2 state inside the n = 3
wavefunction then reproduces the tabulated n = 3 entries as well.

    python3 scripts/mc_crosscheck.py [samples]
"""

import itertools
import math
import sys

from spherium import chords, eigen, oracle, specfun

TABULATED = {
    (3, 2): 0.235892, (4, 2): 0.160622, (5, 2): 0.121691, (6, 2): 0.0979235,
    (3, 3): 0.391247, (4, 3): 0.293556, (5, 3): 0.232591, (6, 3): 0.191796,
}


def frozen_half_four_center(d, qs):
    a = [0.5 * q for q in qs]
    b = [d - 1 + x for x in a]
    first = specfun.hyper_5f4_at_unity(((-0.5,) * 4 + (d - 2.0,), tuple(b)))
    second = specfun.hyper_5f4_at_unity(((0.5,) * 4 + (d - 1.0,), tuple(x + 1 for x in b)))
    weight = 1 / (8 * math.prod(b))
    pref = math.exp(sum(chords._ln_chord_factor(d, q) for q in qs))
    return pref * (first + weight * second)


def frozen_half_xi(d, R, coeffs):
    terms = []
    for qs in itertools.product(range(len(coeffs)), repeat=4):
        w = math.prod(coeffs[q] for q in qs)
        if min(qs) > 0:
            value = frozen_half_four_center(d, qs) * R ** sum(qs)
        else:
            value = chords.four_point_integral(d, qs, R).value
        terms.append(w * value)
    state = eigen.SpheriumState(eigen.StateSpec(d, len(coeffs) - 1), 0.0, R, tuple(coeffs))
    return 1 - math.fsum(terms) / chords.normalization(state) ** 2


def main(samples: int = 2_000_000) -> None:
    print(f"{'d':>2} {'n':>2} {'closed':>10} {'MC':>10} {'stderr':>8} {'z_cl':>6} {'tab':>10} {'z_tab':>7} {'frozen':>10}")
    for (d, n), tab in TABULATED.items():
        state = eigen.solve_state(d, n)
        T = chords.trace_rho1_squared(state)
        est = oracle.mc_purity(state, samples)
        coeffs = list(state.coeffs)
        if n == 3:
            coeffs[2] = eigen.solve_state(d, 2).coeffs[2]
        frozen = frozen_half_xi(d, state.R, coeffs)
        z_tab = est.z_score(1 - tab)
        z_closed = est.z_score(T)
        print(
            f"{d:>2} {n:>2} {1 - T:>10.6f} {1 - est.mean:>10.6f} {est.stderr:>8.1e} {z_closed:>+6.1f} "
            f"{tab:>10.6g} {z_tab:>+7.1f} {frozen:>10.6g}"
        )


if __name__ == "__main__":
    main(*(int(float(a)) for a in sys.argv[1:]))
