import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quantarea import oracle
from quantarea.core import DomainError, QuantizationMode
from quantarea.potentials import (
    Box,
    CotSquared,
    CoulombEffective,
    HOSpinOrbit,
    IsotropicHO,
    ParabolicWell,
    PowerLaw,
    QuadraticPlusInverse,
    RadialBox,
)
from quantarea.solver import solve_bound_state
from quantarea.wavefunction import (
    area_function,
    area_function_for,
    normalization_integral,
    normalization_residual,
    predicted_normalization_residual,
    psi,
    radial_psi,
    sample,
)

CLOSED = {
    "power-law": (PowerLaw(a=1.3, p=1.5), 0.0, [-2.0, -0.3, 0.7, 2.5]),
    "cot-squared": (CotSquared(U0=2.0, a=1.5), 0.75, [0.2, 0.6, 0.9, 1.3]),
    "parabolic-well": (ParabolicWell(U0=2.0, a=1.5), 1.5, [0.4, 1.1, 2.0, 3.5]),
    "quadratic-plus-inverse": (QuadraticPlusInverse(a=0.8, b=1.2), 1.0, [0.3, 0.9, 1.7, 3.0]),
    "coulomb-effective": (CoulombEffective(a=1.44, b=0.3), 0.5, [0.1, 0.4, 2.0, 9.0]),
    "isotropic-ho": (IsotropicHO(a=0.25, b=2.0), 1.0, [0.2, 0.8, 2.0, 5.0]),
    "ho-spin-orbit": (HOSpinOrbit(a=0.25, b=2.0, c_lsj=0.1), 1.0, [0.2, 0.8, 2.0, 5.0]),
    "radial-box": (RadialBox(radius=1.0, b=2.0), 0.5, [0.1, 0.3, 0.8, 1.0]),
}


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_closed_form_area_matches_oracle_quadrature(name):
    p, anchor, xs = CLOSED[name]
    g = area_function(p, anchor)
    assert g.kind == "closed-form"
    m1 = p.scale.m1
    f = lambda t: math.sqrt(abs(p.evaluate(t)))  # noqa: E731
    for x in xs:
        # split where U changes sign: |U| has a square-root cusp there
        lo, hi = min(anchor, x), max(anchor, x)
        cuts = [lo] + oracle.root_scan(p.evaluate, lo, hi, (hi - lo) / 997).roots + [hi] if lo < hi else [lo, hi]
        total = sum(oracle.adaptive_simpson(f, a, b, 1e-13, smooth_ends=True) for a, b in zip(cuts, cuts[1:]))
        ref = m1 * total * (1 if x >= anchor else -1)
        assert g(x) == pytest.approx(ref, rel=1e-8, abs=1e-10)
        assert g.quadrature(x) == pytest.approx(ref, rel=1e-8, abs=1e-10)


def test_box_area_is_zero():
    g = area_function(Box(width=1.0), 0.5)
    assert g(0.3) == 0.0
    with pytest.raises(DomainError):
        g(2.0)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize(
    "p", [Box(width=1.0), PowerLaw(a=1.0, p=2.0), IsotropicHO.from_omega(1.0, 1), CotSquared(U0=1.0, a=1.0)],
    ids=["box", "harmonic", "iso-ho-l1", "cot-squared"],
)
def test_normalization_for_n_pi(p, n):
    s = solve_bound_state(p, QuantizationMode.general(n))
    g = area_function_for(s, p)
    assert normalization_residual(s, g) < 1e-8


@pytest.mark.parametrize(
    "p", [Box(width=1.0), PowerLaw(a=1.0, p=1.0), CoulombEffective.hydrogen_like(1)], ids=["box", "linear", "H"]
)
def test_normalization_ground_state_prediction(p):
    # with q = 2 the cross term leaves a residual of |sin q / q|
    s = solve_bound_state(p, QuantizationMode.ground())
    g = area_function_for(s, p)
    res = normalization_integral(s, g) - 1
    assert abs(res) == pytest.approx(predicted_normalization_residual(2.0), rel=1e-8)
    assert predicted_normalization_residual(2.0) == pytest.approx(abs(math.sin(2) / 2))


@given(q=st.floats(0.5, 20))
def test_predicted_residual_formula(q):
    # ∫ cos²(K(x−x0)) · 2/d over [−d/2, d/2] − 1 = sin(q)/q with q = Kd
    d = 1.0
    val = oracle.adaptive_simpson(lambda x: 2 / d * math.cos(q * x) ** 2, -0.5, 0.5, 1e-13)
    assert abs(val - 1) == pytest.approx(predicted_normalization_residual(q), abs=1e-9)


def test_psi_phase_and_bounds():
    p = PowerLaw(a=1.0, p=2.0)
    s = solve_bound_state(p, QuantizationMode.general(1))
    g = area_function_for(s, p)
    v = psi(s, g, 0.3)
    assert abs(v) == pytest.approx(math.sqrt(2 / s.d) * abs(math.cos(s.K * 0.3)))
    assert math.atan2(v.imag, v.real) == pytest.approx(g(0.3))
    with pytest.raises(DomainError):
        psi(s, g, s.turning.x2 + 1)
    with pytest.raises(DomainError):
        psi(s, g, 0.0, parity="tan")


def test_radial_psi_divides_by_r():
    p = IsotropicHO.from_omega(1.0, 1)
    s = solve_bound_state(p, QuantizationMode.general(1))
    g = area_function_for(s, p)
    r = 0.5 * (s.turning.x1 + s.turning.x2)
    assert radial_psi(s, g, r) == pytest.approx(psi(s, g, r) / r)
    with pytest.raises(DomainError):
        radial_psi(s, g, 0.0)


def test_sample_grid_endpoints_vanish_for_n_pi():
    p = Box(width=1.0)
    s = solve_bound_state(p, QuantizationMode.general(2))
    pts = sample(s, area_function_for(s, p), 11)
    assert len(pts) == 11
    assert abs(pts[0].value) < 1e-12 and abs(pts[-1].value) < 1e-12
    xs = np.array([w.x for w in pts])
    assert np.all(np.diff(xs) > 0)
