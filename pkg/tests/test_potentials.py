import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quantarea import oracle
from quantarea.core import DomainError, NoTurningPointsError
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
    SaxonWoodsComposite,
    Tabulated,
    from_dict,
    from_json,
    load_potential,
    to_json,
)

# (potential, lowest |E|, highest |E|, scan window); windows are wide enough
# that every turning point sits strictly inside
FAMILIES = {
    "power-law-linear": (PowerLaw(a=1.3, p=1.0), 0.05, 20.0, (-40.0, 40.0)),
    "power-law-quartic": (PowerLaw(a=0.7, p=4.0), 0.05, 20.0, (-5.0, 5.0)),
    "cot-squared": (CotSquared(U0=2.0, a=1.5), 0.05, 50.0, (1e-9, 1.5 - 1e-9)),
    "parabolic-well": (ParabolicWell(U0=2.0, a=1.5), 0.05, 30.0, (1e-3, 40.0)),
    "quadratic-plus-inverse": (QuadraticPlusInverse(a=0.8, b=1.2), 2.0, 40.0, (1e-3, 20.0)),
    "coulomb-effective": (CoulombEffective(a=1.44, b=0.3), 0.01, 1.5, (1e-4, 300.0)),
    "isotropic-ho": (IsotropicHO(a=0.25, b=2.0), 1.5, 30.0, (1e-3, 20.0)),
    "ho-spin-orbit": (HOSpinOrbit(a=0.25, b=2.0, c_lsj=0.1), 1.5, 30.0, (1e-3, 20.0)),
    "radial-box": (RadialBox(radius=1.0, b=2.0), 2.5, 80.0, (1e-3, 1.0)),
}


def _oracle_pair(p, e_abs, window):
    target = p.energy_sign * e_abs
    lo, hi = window
    rep = oracle.root_scan(lambda x: p._u(x) - target, lo, hi, (hi - lo) / 20000)
    roots = rep.roots
    if isinstance(p, PowerLaw):
        return roots[0], roots[-1]
    if isinstance(p, RadialBox):
        return roots[0], p.radius
    return roots[0], roots[-1]


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_turning_points_match_oracle_on_20_energies(name):
    p, lo, hi, window = FAMILIES[name]
    worst = 0.0
    for e in np.geomspace(lo, hi, 20):
        tp = p.turning_points(float(e))
        o1, o2 = _oracle_pair(p, float(e), window)
        worst = max(worst, abs(tp.x1 - o1) / max(1.0, abs(o1)), abs(tp.x2 - o2) / max(1.0, abs(o2)))
    assert worst < 1e-9


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_potential_equals_energy_at_turning_points(name):
    p, lo, hi, _ = FAMILIES[name]
    e = math.sqrt(lo * hi)
    tp = p.turning_points(e)
    for x in (tp.x1, tp.x2):
        if isinstance(p, RadialBox) and x == p.radius:
            continue
        assert p.evaluate(x) == pytest.approx(p.energy_sign * e, rel=1e-9, abs=1e-12)


@given(a=st.floats(0.1, 10), p=st.floats(0.5, 6), e=st.floats(1e-3, 1e3))
def test_power_law_turning_points_symmetric(a, p, e):
    tp = PowerLaw(a=a, p=p).turning_points(e)
    assert tp.x1 == -tp.x2
    assert a * tp.x2**p == pytest.approx(e, rel=1e-12)


@given(a=st.floats(0.1, 10), b=st.floats(0.0, 10), e=st.floats(0.01, 100))
def test_quadratic_inverse_roots_are_reciprocal_pair(a, b, e):
    p = IsotropicHO(a=a, b=b) if b > 0 else IsotropicHO(a=a)
    if e * e < 4 * a * b:
        with pytest.raises(NoTurningPointsError):
            p.turning_points(e)
        return
    tp = p.turning_points(e)
    if b > 0:
        # x1² · x2² = b/a for a·r² + b/r² = E
        assert tp.x1**2 * tp.x2**2 == pytest.approx(b / a, rel=1e-9)


def test_box_turning_points_are_walls():
    tp = Box(width=2.5).turning_points(3.0)
    assert (tp.x1, tp.x2) == (0.0, 2.5)


def test_coulomb_below_minimum_raises():
    with pytest.raises(NoTurningPointsError):
        CoulombEffective(a=1.0, b=1.0).turning_points(10.0)


def test_domain_checks():
    with pytest.raises(DomainError):
        PowerLaw(a=-1.0, p=2.0)
    with pytest.raises(DomainError):
        CotSquared(U0=1.0, a=1.0).evaluate(1.5)
    with pytest.raises(DomainError):
        Tabulated(xs=(0.0, 0.0), us=(1.0, 2.0))


def test_tabulated_interpolation_and_turning_points(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("x,U\n-2,6\n0,0\n2,6\n")
    p = Tabulated.from_csv(path)
    assert p.evaluate(1.0) == 3.0
    tp = p.turning_points(1.5)
    assert (tp.x1, tp.x2) == (-0.5, 0.5)


def test_saxon_woods_terms():
    p = SaxonWoodsComposite(V0=50.0, R0=5.0, a0=0.6, V_so=20.0, R_so=5.0, a_so=0.6, Z=29, ell=1, j=1.5,
                            R_co=5.0, charged=True, units="nuclear-MeV-fm", mass=938.0)
    assert p.central(5.0) == pytest.approx(-25.0)
    assert p.alpha == pytest.approx(0.5)
    # uniformly charged sphere: continuous at the surface
    assert p.coulomb(5.0 - 1e-9) == pytest.approx(p.coulomb(5.0 + 1e-9), rel=1e-8)
    assert p.signed_value(-3.0) != p.signed_value(3.0)  # the odd 1/r pieces change sign


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_json_roundtrip(name):
    p = FAMILIES[name][0]
    assert from_json(to_json(p)) == p


def test_json_accepts_ell_for_centrifugal_families():
    p = from_dict({"family": "isotropic-ho", "params": {"a": 0.25, "ell": 2}, "mass": 0.5})
    assert p.b == pytest.approx(6.0)


@pytest.mark.parametrize(
    "text", ['{"family": "box"', '{"params": {}}', '{"family": "nope"}', '{"family": "box", "params": {"w": 1}}']
)
def test_bad_documents(text):
    with pytest.raises(DomainError):
        from_json(text)


def test_load_tabulated_csv_relative(tmp_path):
    (tmp_path / "u.csv").write_text("0,1\n1,0\n2,1\n")
    (tmp_path / "p.json").write_text(json.dumps({"family": "tabulated", "params": {"csv": "u.csv"}}))
    p = load_potential(tmp_path / "p.json")
    assert p.xs == (0.0, 1.0, 2.0)
