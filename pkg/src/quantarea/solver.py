"""Bound-state energies from the turning-point quantization rule K·d = q.

The workhorse is the fixed point y = d²(y): for a trial y the energy
magnitude is |E| = Mh·q²/y, the turning points of that energy give a width
d(y), and the level is where d(y)² returns y.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import (
    ConvergenceError,
    DomainError,
    NoTurningPointsError,
    QuantareaError,
    QuantizationMode,
    ScaleConstants,
    UnsupportedError,
)
from .potentials import (
    Box,
    CoulombEffective,
    HOSpinOrbit,
    IsotropicHO,
    ParabolicWell,
    Potential,
    PowerLaw,
    QuadraticPlusInverse,
    RadialBox,
    SaxonWoodsComposite,
    TurningPair,
)

FIXED_POINT_TOL = 1e-10


class NoBoundStateError(QuantareaError):
    """No energy satisfies the quantization condition in the allowed window."""


class SpectrumError(QuantareaError):
    """Every requested mode of a spectrum failed."""

    def __init__(self, failures: dict[str, str]):
        self.failures = failures
        detail = "; ".join(f"{k}: {v}" for k, v in failures.items())
        super().__init__(f"no mode could be solved ({detail})")


@dataclass(frozen=True)
class BoundState:
    """One quantized level.

    ``energy`` carries the family's sign convention: positive level energies
    for confining wells, negative for attractive wells (Coulomb, Saxon-Woods).
    """

    mode: QuantizationMode
    d: float
    turning: TurningPair
    energy: float
    scale: ScaleConstants
    method: str = "fixed-point"
    residual: float = 0.0

    @property
    def q(self) -> float:
        return self.mode.q

    @property
    def x0(self) -> float:
        return self.turning.x0

    @property
    def e_abs(self) -> float:
        return abs(self.energy)

    @property
    def K(self) -> float:
        return self.scale.m1 * math.sqrt(self.e_abs)

    @property
    def norm(self) -> float:
        return math.sqrt(2.0 / self.d)


@dataclass(frozen=True)
class AreaQuanta:
    Sp: float
    Sk: float
    SE: float


@dataclass(frozen=True)
class SpectrumResult:
    states: list[BoundState]
    failures: dict[str, str] = field(default_factory=dict)


# -- closed forms --------------------------------------------------------------


def _ho_like(a: float, b: float, Mh: float, q: float, shift: float = 0.0) -> float:
    base = 2 * math.sqrt(a * b) - shift
    return 0.5 * (base + math.sqrt(base * base + 4 * a * Mh * q * q))


def analytic_energy(p: Potential, mode: QuantizationMode, branch: str = "+") -> float:
    """Closed-form level energy (signed per the family convention).

    ``branch`` only matters for the radial box, whose two roots are
    (√b ± √Mh·q)²/R²; '+' is the default.
    """
    q = mode.q
    Mh = p.scale.Mh
    if isinstance(p, PowerLaw):
        return Mh * q * q * (p.a * 2.0 ** (-p.p) / (Mh * q * q)) ** (2 / (p.p + 2))
    if isinstance(p, Box):
        return Mh * q * q / p.width**2
    if isinstance(p, ParabolicWell):
        return math.sqrt(Mh * p.U0 / p.a**2) * q
    if isinstance(p, (QuadraticPlusInverse, IsotropicHO)):
        return _ho_like(p.a, p.b, Mh, q)
    if isinstance(p, HOSpinOrbit):
        return _ho_like(p.a, p.b, Mh, q, p.c_lsj)
    if isinstance(p, CoulombEffective):
        return -(p.a**2) / (Mh * q * q + 4 * p.b)
    if isinstance(p, RadialBox):
        if branch not in ("+", "-"):
            raise DomainError(f"radial-box branch must be '+' or '-', got {branch!r}")
        s = math.sqrt(Mh) * q
        root = math.sqrt(p.b) + s if branch == "+" else math.sqrt(p.b) - s
        return root * root / p.radius**2
    raise UnsupportedError(f"no closed-form energy for family {p.family!r}")


def has_closed_form(p: Potential) -> bool:
    return isinstance(
        p,
        (PowerLaw, Box, ParabolicWell, QuadraticPlusInverse, IsotropicHO, HOSpinOrbit,
         CoulombEffective, RadialBox),
    )


# -- fixed point ---------------------------------------------------------------


def width_squared(p: Potential, q: float, y: float) -> float:
    """d²(y): squared turning-point separation at |E| = Mh q²/y."""
    tp = p.turning_points(p.scale.Mh * q * q / y)
    return tp.d * tp.d


def _energy_guess(p: Potential) -> float:
    xm, um = p.well_minimum()
    if p.energy_sign < 0:
        return 0.5 * abs(um) if math.isfinite(um) and um != 0 else 1.0
    probe = xm + p._length_scale()
    try:
        up = p.evaluate(probe)
    except DomainError:
        up = abs(um) + 1.0
    return max(abs(up), abs(um), 1e-300) * 2.0


def solve_fixed_point(
    p: Potential, q: float, seed_y: float | None = None, max_expansions: int = 60
) -> tuple[float, TurningPair]:
    """Solve d²(y) = y by bracketed root finding on g(y) = d²(y) − y.

    The bracket grows geometrically around the seed. Where a sample with
    turning points sits next to one without, the edge of the admissible
    region is located by bisection and sampled too, so narrow windows of
    admissible y are not stepped over. Among the sign changes found the
    smallest y is taken.
    """
    Mh = p.scale.Mh
    if seed_y is None:
        seed_y = Mh * q * q / _energy_guess(p)

    def g(y: float) -> float | None:
        try:
            v = width_squared(p, q, y) - y
        except (DomainError, ZeroDivisionError, OverflowError):  # includes a collapsed pair
            return None
        return v if math.isfinite(v) else None

    vals: dict[float, float | None] = {seed_y: g(seed_y)}
    probed: set[tuple[float, float]] = set()
    ratio = 2.0**0.5

    def probe_edges() -> None:
        ys = sorted(vals)
        for lo, hi in zip(ys, ys[1:]):
            if (vals[lo] is None) == (vals[hi] is None) or (lo, hi) in probed:
                continue
            probed.add((lo, hi))
            good, bad = (lo, hi) if vals[lo] is not None else (hi, lo)
            for _ in range(80):
                mid = math.sqrt(good * bad)
                if mid in (good, bad):
                    break
                if g(mid) is None:
                    bad = mid
                else:
                    good = mid
            vals[good] = g(good)

    def brackets() -> list[tuple[float, float]]:
        ys = sorted(vals)
        return [
            (a, b)
            for a, b in zip(ys, ys[1:])
            if vals[a] is not None and vals[b] is not None and (vals[a] > 0) != (vals[b] > 0)
        ]

    found: list[tuple[float, float]] = []
    k = 0
    for k in range(1, max_expansions + 1):
        for y in (seed_y * ratio**k, seed_y * ratio**-k):
            vals[y] = g(y)
        probe_edges()
        found = brackets()
        if found:
            break
    if not found:
        if all(v is None for v in vals.values()):
            last_error = None
            try:
                width_squared(p, q, seed_y)
            except NoTurningPointsError as exc:
                last_error = exc
            raise NoTurningPointsError(
                f"{p.family}: no turning points for any trial energy (q={q:g})"
            ) from last_error
        ys = sorted(vals)
        raise ConvergenceError(
            f"{p.family}: no fixed point of y = d²(y) in y ∈ [{ys[0]:.6g}, {ys[-1]:.6g}] (q={q:g})"
        )
    # the smallest root: keep stepping down while the function stays defined
    y = min(vals)
    for _ in range(4 * max_expansions):
        y /= ratio
        vals[y] = g(y)
        if vals[y] is None:
            break
    found = brackets()
    lo, hi = found[0]
    fn = lambda y: width_squared(p, q, y) - y  # noqa: E731
    y = brentq(fn, lo, hi, xtol=1e-14 * lo, rtol=4 * np.finfo(float).eps, maxiter=200)
    tp = p.turning_points(Mh * q * q / y)
    return float(y), tp


def _state_from_y(
    p: Potential, mode: QuantizationMode, y: float, tp: TurningPair, method: str
) -> BoundState:
    e_abs = p.scale.Mh * mode.q**2 / y
    residual = abs(tp.d**2 - y) / y
    return BoundState(
        mode=mode,
        d=tp.d,
        turning=tp,
        energy=p.energy_sign * e_abs,
        scale=p.scale,
        method=method,
        residual=residual,
    )


def solve_bound_state(p: Potential, mode: QuantizationMode, verify: bool = False) -> BoundState:
    """Solve one level.

    Families with a closed form use it and confirm the fixed-point residual;
    the others go through the bracketed fixed-point search. With ``verify``
    the fixed-point path also runs for closed-form families and the two
    energies must agree to 1e-9 relative.
    """
    q = mode.q
    Mh = p.scale.Mh
    state = None
    if has_closed_form(p):
        e = abs(analytic_energy(p, mode))
        y = Mh * q * q / e
        tp = p.turning_points(e)
        candidate = _state_from_y(p, mode, y, tp, "closed-form")
        if candidate.residual < FIXED_POINT_TOL:
            state = candidate
        seed = y
    else:
        seed = None
    if state is None or verify:
        y, tp = solve_fixed_point(p, q, seed)
        numeric = _state_from_y(p, mode, y, tp, "fixed-point")
        if state is not None and abs(numeric.e_abs / state.e_abs - 1) > 1e-9:
            raise ConvergenceError(
                f"{p.family}: closed form {state.energy!r} and fixed point "
                f"{numeric.energy!r} disagree for {mode.label}"
            )
        state = state or numeric
    return state


def spectrum(
    p: Potential, modes: Sequence[QuantizationMode], workers: int | None = None
) -> SpectrumResult:
    """Solve every mode; per-mode failures are collected rather than raised."""
    if not modes:
        raise DomainError("spectrum needs at least one mode")

    def one(m: QuantizationMode) -> BoundState | str:
        try:
            return solve_bound_state(p, m)
        except QuantareaError as exc:
            return f"{type(exc).__name__}: {exc}"

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, modes))
    else:
        results = [one(m) for m in modes]
    states = [r for r in results if isinstance(r, BoundState)]
    failures = {m.label: r for m, r in zip(modes, results) if isinstance(r, str)}
    if not states:
        raise SpectrumError(failures)
    states.sort(key=lambda s: (s.energy, s.mode))
    return SpectrumResult(states, failures)


# -- potential areas -----------------------------------------------------------


def potential_areas(b: BoundState) -> AreaQuanta:
    """The three quantized areas 2Mh·q/d, Mh·(q/d)(q−2) and Mh·q²/d."""
    Mh, q, d = b.scale.Mh, b.q, b.d
    Sp = 2 * Mh * q / d
    Sk = Mh * (q / d) * (q - 2) if b.mode.q != 2.0 else 0.0
    return AreaQuanta(Sp=Sp, Sk=Sk, SE=Mh * q * q / d)


def integrated_potential(p: Potential, b: BoundState) -> float:
    """∫U dx between the turning points (numerically), for comparison with Sp."""
    x1, x2 = b.turning.x1, b.turning.x2
    lo = x1 if x1 > 0 or not p.radial else x1 + 1e-12 * b.d
    val, _ = quad(p.evaluate, lo, x2, limit=200, epsabs=1e-12, epsrel=1e-12)
    return float(val)


# -- Saxon-Woods ---------------------------------------------------------------


def saxon_woods_level(
    p: SaxonWoodsComposite, mode: QuantizationMode, method: str = "symmetric-sum"
) -> BoundState:
    """Level of the composite Saxon-Woods well.

    ``symmetric-sum`` solves U(−d/2) + U(d/2) + 2Mh·q²/d² = 0 for d on
    (0, 4R_co) and reports E = −Mh·q²/d² (turning points placed at ±d/2).
    ``turning-points`` runs the general fixed point on the radial well.
    """
    if method == "turning-points":
        return solve_bound_state(p, mode)
    if method != "symmetric-sum":
        raise DomainError(f"unknown Saxon-Woods method {method!r}")
    q = mode.q
    Mh = p.scale.Mh

    def f(d: float) -> float:
        return p.signed_value(-d / 2) + p.signed_value(d / 2) + 2 * Mh * q * q / (d * d)

    ds = np.linspace(4 * p.R_co / 4000, 4 * p.R_co, 4000)
    fs = [f(float(d)) for d in ds]
    for k in range(len(ds) - 1):
        if (fs[k] > 0) != (fs[k + 1] > 0):
            d = brentq(f, ds[k], ds[k + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
            break
    else:
        raise ConvergenceError(
            f"saxon-woods: no sign change of the symmetric-sum condition on d ∈ (0, {4 * p.R_co:g}) "
            f"for {mode.label}"
        )
    tp = TurningPair(-d / 2, d / 2)
    return BoundState(
        mode=mode,
        d=float(d),
        turning=tp,
        energy=-Mh * q * q / d**2,
        scale=p.scale,
        method="symmetric-sum",
        residual=0.0,
    )


# -- Dirac ---------------------------------------------------------------------


@dataclass(frozen=True)
class DiracLevel:
    branch: str
    energy: float
    r1: float
    r2: float

    @property
    def d(self) -> float:
        return self.r2 - self.r1


def dirac_effective(
    V: Callable[[float], float],
    dV: Callable[[float], float],
    j: float,
    L: int,
    energy: float,
    sign: int,
) -> Callable[[float], float]:
    """U(r) = 2EV − V² + (j+½)²/r² + L(L+1)/r² ± √((j+½)²/r⁴ − V'²).

    A negative radicand is clipped to zero so U stays real.
    """
    k2 = (j + 0.5) ** 2
    ll = L * (L + 1)

    def U(r: float) -> float:
        v = V(r)
        rad = k2 / r**4 - dV(r) ** 2
        return 2 * energy * v - v * v + (k2 + ll) / (r * r) + sign * math.sqrt(max(rad, 0.0))

    return U


def dirac_turning_points(
    U: Callable[[float], float], alpha: float, r_lo: float, r_hi: float, samples: int = 4000
) -> tuple[float, float] | None:
    """First interval where U(r) < alpha, located on a log grid then refined."""
    rs = np.geomspace(r_lo, r_hi, samples)
    fs = np.array([U(float(r)) - alpha for r in rs])
    below = np.nonzero(fs < 0)[0]
    if below.size == 0:
        return None
    i = int(below[0])
    r1 = 0.0 if i == 0 else brentq(lambda r: U(r) - alpha, rs[i - 1], rs[i], xtol=1e-14)
    k = i
    while k < len(rs) and fs[k] < 0:
        k += 1
    if k == len(rs):
        return None
    r2 = brentq(lambda r: U(r) - alpha, rs[k - 1], rs[k], xtol=1e-14)
    return float(r1), float(r2)


def dirac_bound_energy(
    V: Callable[[float], float],
    j: float,
    L: int,
    mode: QuantizationMode,
    mass: float = 1.0,
    dV: Callable[[float], float] | None = None,
    r_range: tuple[float, float] = (1e-4, 50.0),
    energy_samples: int = 400,
) -> dict[str, DiracLevel]:
    """Solve d(E)·√(m² − E²) = q on both ±√ branches (ħ = c = 1).

    Returns the levels found, keyed by branch '+' or '−'. Raises
    NoBoundStateError when neither branch has a root with |E| < m.
    """
    if dV is None:
        def dV(r: float, h: float = 1e-6) -> float:
            hh = h * max(1.0, r)
            return (V(r + hh) - V(r - hh)) / (2 * hh) if r > hh else (V(r + hh) - V(r)) / hh
    q = mode.q
    out: dict[str, DiracLevel] = {}
    es = np.linspace(-mass, mass, energy_samples + 2)[1:-1]
    for sign, label in ((1, "+"), (-1, "-")):

        def h(E: float) -> float | None:
            U = dirac_effective(V, dV, j, L, E, sign)
            tp = dirac_turning_points(U, E * E - mass * mass, *r_range)
            if tp is None:
                return None
            return (tp[1] - tp[0]) * math.sqrt(mass * mass - E * E) - q

        hs = [h(float(E)) for E in es]
        for k in range(len(es) - 1):
            a, b = hs[k], hs[k + 1]
            if a is None or b is None or (a > 0) == (b > 0):
                continue
            E = brentq(lambda e: h(e) if h(e) is not None else math.nan, es[k], es[k + 1], xtol=1e-13)
            U = dirac_effective(V, dV, j, L, E, sign)
            r1, r2 = dirac_turning_points(U, E * E - mass * mass, *r_range)
            out[label] = DiracLevel(label, float(E), r1, r2)
            break
    if not out:
        raise NoBoundStateError(f"no Dirac bound state with |E| < m for {mode.label}, j={j}, L={L}")
    return out


def modes_from_labels(labels: Iterable[str]) -> list[QuantizationMode]:
    return [QuantizationMode.parse(s) for s in labels]
