"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed together at the end
of the pytest run (see conftest.py) and also when this file is executed
directly. Failing criteria fail their test: nothing here is loosened to pass.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from quantarea import oracle
from quantarea.core import ELECTRON_MC2, QuantizationMode, nuclide_mass
from quantarea.potentials import (
    CotSquared,
    CoulombEffective,
    HOSpinOrbit,
    IsotropicHO,
    ParabolicWell,
    PowerLaw,
    QuadraticPlusInverse,
    RadialBox,
    SaxonWoodsComposite,
)
from quantarea.refdata import load_table, table_cases
from quantarea.reproduce import CU68, reproduce, t4_mode
from quantarea.scattering import cross_sections
from quantarea.solver import saxon_woods_level, solve_bound_state
from quantarea.wavefunction import (
    area_function,
    area_function_for,
    normalization_integral,
    predicted_normalization_residual,
)

RESULTS: dict[int, str] = {}


def record(n: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS[n] = line
    print(line)


def _cells(report, columns=None):
    return [c for c in report.cells if columns is None or c.column in columns]


def _worst(cells, key="abs_dev"):
    vals = [getattr(c, key) for c in cells if getattr(c, key) is not None]
    return max(vals) if vals else float("nan")


def _fails(cells):
    return [f"{c.row}/{c.column}" for c in cells if c.status == "fail"]


def _table_criterion(n, name, tid, columns):
    cells = _cells(reproduce(tid), columns)
    bad = _fails(cells)
    record(n, name, not bad, f"{len(cells) - len(bad)}/{len(cells)} cells, worst |dev| {_worst(cells):.2e}"
           + (f", failing {bad}" if bad else ""))
    return bad


def test_criterion_01_spherical_box_levels():
    assert not _table_criterion(1, "spherical box (T1), abs 5e-3", "T1", {"E_area"})


def test_criterion_02_isotropic_oscillator_levels():
    assert not _table_criterion(2, "isotropic oscillator (T2), abs 1e-3", "T2", {"E_area"})


def test_criterion_03_spin_orbit_oscillator_levels():
    assert not _table_criterion(3, "oscillator + spin-orbit (T3), abs 1e-3", "T3", {"E_area"})


def test_criterion_04_hydrogen_ground_state():
    p = CoulombEffective.hydrogen_like(1, 0, mass=ELECTRON_MC2 * 1e6)
    e = solve_bound_state(p, QuantizationMode.ground()).energy
    rel = abs(e / -13.6 - 1)
    record(4, "hydrogen ground state, 0.05% of -13.6 eV", rel < 5e-4, f"E = {e:.6f} eV, rel dev {rel:.2e}")
    assert rel < 5e-4


def test_criterion_05_cold_emission():
    rep = reproduce("T5")
    cells = _cells(rep, {"T_new", "T_wkb"})
    ratio = _cells(rep, {"T_new/4T_wkb"})
    bad = _fails(cells) + _fails(ratio)
    record(5, "cold emission (T5), 3 s.f. + |T_new/4T_wkb - 1| < 1e-3", not bad,
           f"{len(cells)} transmission cells, worst rel dev {_worst(cells, 'rel_dev'):.2e}; "
           f"worst ratio dev {_worst(ratio):.2e}" + (f", failing {bad}" if bad else ""))
    assert not bad


def test_criterion_06_alpha_half_lives():
    t6 = reproduce("T6")
    t7 = reproduce("T7")
    new = _cells(t6, {"t_new"}) + _cells(t7, {"t_new"})
    wkb = _cells(t6, {"t_wkb"})
    bad_new, bad_wkb = _fails(new), _fails(wkb)
    detail = (f"t_new {len(new) - len(bad_new)}/{len(new)} within 0.5% (worst {_worst(new, 'rel_dev'):.2%}); "
              f"t_wkb {len(wkb) - len(bad_wkb)}/{len(wkb)} within 0.5% (worst {_worst(wkb, 'rel_dev'):.2%})")
    if bad_wkb or bad_new:
        detail += f"; failing {bad_new + bad_wkb}"
    record(6, "alpha half-lives (T6, T7), rel 0.5%", not (bad_new or bad_wkb), detail)
    assert not (bad_new or bad_wkb)


def test_criterion_07_thermal_neutron_cross_sections():
    rep = reproduce("T8")
    sig = _cells(rep, {"sigma_s", "sigma_r", "sigma_t"})
    ident = _cells(rep, {"identity"})
    inv = _cells(rep, {"R0_inverted"})
    bad = _fails(sig) + _fails(ident) + _fails(inv)
    record(7, "thermal neutrons (T8), printed precision", not bad,
           f"sigma cells {len(sig) - len(_fails(sig))}/{len(sig)}; identity {len(ident) - len(_fails(ident))}/"
           f"{len(ident)}; R0 inversion {len(inv) - len(_fails(inv))}/{len(inv)} (worst {_worst(inv):.1e} fm)"
           + (f"; failing {bad}" if bad else ""))
    assert not bad


def test_criterion_08_helium3_scattering():
    rep = reproduce("T9")
    st = _cells(rep, {"sigma_t"})
    radii = _cells(rep, {"R_c", "R_m", "r1"})
    bad = _fails(st) + _fails(radii)
    record(8, "3He scattering (T9), sigma_t 0.5%, radii 0.2%", not bad,
           f"sigma_t worst {_worst(st, 'rel_dev'):.2%}, radii worst {_worst(radii, 'rel_dev'):.2%}"
           + (f"; failing {bad}" if bad else ""))
    assert not bad


def _cu68(ell, j, proton):
    Z, A = (1, 1) if proton else (0, 1)
    return SaxonWoodsComposite(**CU68, ell=ell, j=j, charged=proton, units="nuclear-MeV-fm",
                               mass=nuclide_mass(Z, A))


def _sw_residual(p, state):
    d, q, Mh = state.d, state.q, p.scale.Mh
    kinetic = 2 * Mh * q * q / d**2
    return abs(p.signed_value(-d / 2) + p.signed_value(d / 2) + kinetic) / kinetic


def test_criterion_09_saxon_woods_levels():
    rep = reproduce("T4")
    s_cells = [c for c in rep.cells if c.row == "1s1/2"]
    s_ok = all(c.rel_dev <= 0.02 for c in s_cells)
    table = load_table("T4")
    anomalous = {r.label for r in table.rows if r.anomaly}
    flagged = {c.row for c in rep.cells if c.status == "flagged"}
    flags_ok = anomalous == flagged and bool(anomalous)
    # properties on the flagged rows: each level against the n=1 level of the same (ℓ, j)
    neg_ok, resid_ok, order_bad = True, True, []
    for row in table.rows:
        if not row.anomaly:
            continue
        ell, j, n = row.inputs["ell"], row.inputs["j"], row.inputs["n"]
        for proton in (False, True):
            p = _cu68(ell, j, proton)
            lower = saxon_woods_level(p, t4_mode(n - 1))
            upper = saxon_woods_level(p, t4_mode(n))
            neg_ok &= lower.energy < 0 and upper.energy < 0
            resid_ok &= max(_sw_residual(p, lower), _sw_residual(p, upper)) < 1e-10
            if not lower.energy < upper.energy:
                order_bad.append(f"{row.label} {'p' if proton else 'n'} ({upper.energy:.3f} <= {lower.energy:.3f})")
    ok = s_ok and flags_ok and neg_ok and resid_ok and not order_bad
    detail = ("1s1/2 " + ", ".join(f"{c.column} {c.computed:.4f} vs {c.reference} ({c.rel_dev:.1%})" for c in s_cells)
              + f"; anomalies flagged {'yes' if flags_ok else 'no'}; negative energies {'yes' if neg_ok else 'no'}"
              + f"; residual < 1e-10 {'yes' if resid_ok else 'no'}"
              + ("; level order in q broken: " + ", ".join(order_bad) if order_bad else "; level order in q holds"))
    record(9, "Saxon-Woods Cu-68 (T4)", ok, detail)
    assert ok


# -- criterion 10: compact property sweep -------------------------------------------------

CLOSED = [
    (PowerLaw(a=1.3, p=1.0), 0.05, 20.0, (-40.0, 40.0)),
    (PowerLaw(a=0.7, p=4.0), 0.05, 20.0, (-5.0, 5.0)),
    (ParabolicWell(U0=2.0, a=1.5), 0.05, 30.0, (1e-3, 40.0)),
    (QuadraticPlusInverse(a=0.8, b=1.2), 2.0, 40.0, (1e-3, 20.0)),
    (CoulombEffective(a=1.44, b=0.3), 0.01, 1.5, (1e-4, 300.0)),
    (IsotropicHO(a=0.25, b=2.0), 1.5, 30.0, (1e-3, 20.0)),
    (HOSpinOrbit(a=0.25, b=2.0, c_lsj=0.1), 1.5, 30.0, (1e-3, 20.0)),
    (RadialBox(radius=1.0, b=2.0), 2.5, 80.0, (1e-3, 1.0)),
]


def _turning_points_worst():
    worst = 0.0
    for p, lo, hi, (a, b) in CLOSED:
        for e in np.geomspace(lo, hi, 20):
            tp = p.turning_points(float(e))
            roots = oracle.root_scan(lambda x: p._u(x) - p.energy_sign * float(e), a, b, (b - a) / 20000).roots
            o2 = p.radius if isinstance(p, RadialBox) else roots[-1]
            worst = max(worst, abs(tp.x1 - roots[0]) / max(1, abs(roots[0])), abs(tp.x2 - o2) / max(1, abs(o2)))
    return worst


def _fixed_point_worst():
    modes = [QuantizationMode.ground(), QuantizationMode.general(1), QuantizationMode.general(2)]
    pots = [p for p, *_ in CLOSED] + [CotSquared(U0=1.0, a=1.0), IsotropicHO.from_omega(1.0, 3)]
    return max(solve_bound_state(p, m).residual for p in pots for m in modes)


def _area_worst():
    worst = 0.0
    for p, anchor, xs in [(PowerLaw(a=1.3, p=1.5), 0.0, [-2.0, 0.7, 2.5]),
                          (IsotropicHO(a=0.25, b=2.0), 1.0, [0.2, 2.0, 5.0]),
                          (CotSquared(U0=2.0, a=1.5), 0.75, [0.2, 1.3]),
                          (ParabolicWell(U0=2.0, a=1.5), 1.5, [0.4, 3.5])]:
        g = area_function(p, anchor)
        for x in xs:
            ref = p.scale.m1 * oracle.adaptive_simpson(lambda t: math.sqrt(abs(p.evaluate(t))), anchor, x, 1e-13)
            worst = max(worst, abs(g(x) - ref) / max(abs(ref), 1e-12))
    return worst


def _normalization_worst():
    worst_npi, worst_q2 = 0.0, 0.0
    for p in (PowerLaw(a=1.0, p=2.0), IsotropicHO.from_omega(1.0, 1), CotSquared(U0=1.0, a=1.0)):
        for n in (1, 2, 3):
            s = solve_bound_state(p, QuantizationMode.general(n))
            worst_npi = max(worst_npi, abs(normalization_integral(s, area_function_for(s, p)) - 1))
        s = solve_bound_state(p, QuantizationMode.ground())
        dev = abs(normalization_integral(s, area_function_for(s, p)) - 1)
        worst_q2 = max(worst_q2, abs(dev - predicted_normalization_residual(2.0)))
    return worst_npi, worst_q2


def _identity_worst():
    worst = 0.0
    for tid in ("T8", "T9"):
        for case in table_cases(load_table(tid)):
            for sign in ("lower", "upper"):
                cs = cross_sections(case, sign)
                worst = max(worst, abs(cs.sigma_s + cs.sigma_r - cs.sigma_t) / cs.sigma_t)
    return worst


def _cli_identical():
    argvs = [["reproduce-table", "6"], ["alpha", "--nuclide", "84,208", "--ealpha", "5.215", "--json"],
             ["scatter", "--projectile", "0,1", "--target", "6,12", "--elab", "2.5e-8", "--r0", "1.86896",
              "--v0", "35.2934", "--theta-points", "11"]]
    for argv in argvs:
        cmd = [sys.executable, "-m", "quantarea.cli", *argv]
        a = subprocess.run(cmd, capture_output=True, check=False).stdout
        b = subprocess.run(cmd, capture_output=True, check=False).stdout
        if not a or a != b:
            return False
    return True


def test_criterion_10_property_suites():
    fp = _fixed_point_worst()
    tp = _turning_points_worst()
    area = _area_worst()
    npi, q2 = _normalization_worst()
    ident = _identity_worst()
    cli = _cli_identical()
    checks = {
        "fixed-point residual < 1e-10": (fp < 1e-10, f"{fp:.1e}"),
        "turning points vs oracle < 1e-9": (tp < 1e-9, f"{tp:.1e}"),
        "closed-form vs quadrature area < 1e-8": (area < 1e-8, f"{area:.1e}"),
        "normalization (q = n pi) < 1e-8": (npi < 1e-8, f"{npi:.1e}"),
        "normalization (q = 2) matches |sin q / q|": (q2 < 1e-8, f"{q2:.1e}"),
        "sigma_s + sigma_r = sigma_t": (ident < 1e-12, f"{ident:.1e}"),
        "byte-identical CLI reruns": (cli, "yes" if cli else "no"),
    }
    ok = all(v[0] for v in checks.values())
    record(10, "property suites", ok, "; ".join(f"{k} {v[1]}" for k, v in checks.items()))
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
