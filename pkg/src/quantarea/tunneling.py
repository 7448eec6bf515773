"""Barrier transmission, cold emission and alpha-decay half-lives.

T_new = 2/(cosh 2Kd + cos 2P) and T_wkb = exp(−2g). When K or P is purely
imaginary (cold emission) the flags in ``Branch`` swap cosh and cos, so every
transmission is computed in real arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import (
    C_LIGHT,
    DAY_SECONDS,
    ELECTRON_MC2,
    YEAR_SECONDS,
    ConvergenceError,
    DomainError,
    QuantareaError,
    field_v_per_cm_to_v_per_nm,
    nuclide_mass,
    reduced_mass,
    scale_constants,
    unit_system,
)
from .potentials import Potential

HALF_LIFE_LN2 = 0.693


class Branch(str, Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


class SingularTransmissionError(QuantareaError, ArithmeticError):
    """The transmission denominator is not positive."""


class InvalidBarrierError(DomainError):
    """U − E is negative somewhere inside the requested barrier interval."""


@dataclass(frozen=True)
class BarrierResult:
    K: float
    d: float
    P: float
    T_new: float
    T_wkb: float
    g: float
    K_branch: Branch = Branch.REAL
    P_branch: Branch = Branch.REAL

    def as_dict(self) -> dict[str, float | str]:
        return {
            "K": self.K,
            "K_branch": self.K_branch.value,
            "d": self.d,
            "P": self.P,
            "P_branch": self.P_branch.value,
            "g": self.g,
            "T_new": self.T_new,
            "T_wkb": self.T_wkb,
        }


def _two_over_sum(hyper: float, other_hyper: float | None, trig: float | None) -> float:
    """2/(cosh x + z) for x ≥ 0 with z either cosh y or a bounded trig value."""
    x = abs(hyper)
    if other_hyper is not None:
        y = abs(other_hyper)
        if y > x:
            x, y = y, x
        e = math.exp(-x)
        return 4 * e / (1 + e * e + math.exp(y - x) + math.exp(-y - x))
    e = math.exp(-x)
    denom = 1 + e * e + 2 * trig * e
    if denom <= 0:
        raise SingularTransmissionError(f"transmission denominator {denom!r} is not positive")
    return 4 * e / denom


def transmission_new(
    K: float,
    d: float,
    P: float,
    K_branch: Branch | str = Branch.REAL,
    P_branch: Branch | str = Branch.REAL,
) -> float:
    """2/(cosh 2Kd + cos 2P) with K and P given by magnitude plus branch flag.

    An imaginary K turns cosh(2Kd) into cos(2|K|d); an imaginary P turns
    cos(2P) into cosh(2|P|).
    """
    kb, pb = Branch(K_branch), Branch(P_branch)
    x, y = 2 * K * d, 2 * P
    if kb is Branch.REAL and pb is Branch.REAL:
        return _two_over_sum(x, None, math.cos(y))
    if kb is Branch.REAL:
        return _two_over_sum(x, y, None)
    if pb is Branch.IMAGINARY:
        return _two_over_sum(y, None, math.cos(x))
    denom = math.cos(x) + math.cos(y)
    if denom <= 0:
        raise SingularTransmissionError(
            f"transmission denominator cos(2Kd) + cos(2P) = {denom!r} is not positive"
        )
    return 2 / denom


def transmission_wkb_from_exponent(g: float) -> float:
    return math.exp(-2 * g)


def transmission_wkb(
    barrier: Potential, energy: float, r1: float, r2: float, points: int = 64
) -> tuple[float, float]:
    """(T_wkb, g) with g = m1∫√(U − E) over [r1, r2] by quadrature."""
    if r2 < r1:
        raise DomainError("barrier needs r2 >= r1")
    if r2 == r1:
        return 1.0, 0.0
    m1 = barrier.scale.m1
    tol = 1e-9 * max(1.0, abs(energy))
    for x in np.linspace(r1, r2, points)[1:-1]:
        if barrier.evaluate(float(x)) - energy < -tol:
            raise InvalidBarrierError(
                f"{barrier.family}: U({x:.6g}) < E={energy:g} inside the barrier [{r1}, {r2}]"
            )
    val, _ = quad(
        lambda x: math.sqrt(max(barrier.evaluate(x) - energy, 0.0)),
        r1,
        r2,
        limit=400,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    g = m1 * val
    return transmission_wkb_from_exponent(g), g


def barrier_turning_points(barrier: Potential, energy: float) -> tuple[float, float]:
    """Entry and exit points where U = E around the barrier maximum."""
    lo, hi = barrier._search_window()
    xs = np.linspace(lo, hi, 4001)[1:-1]
    us = np.array([barrier.evaluate(float(x)) for x in xs])
    i = int(np.argmax(us))
    if us[i] <= energy:
        raise InvalidBarrierError(
            f"{barrier.family}: E={energy:g} passes over the barrier top {us[i]:g}"
        )
    left = np.nonzero(us[:i] < energy)[0]
    right = np.nonzero(us[i:] < energy)[0]
    if left.size == 0 or right.size == 0:
        raise InvalidBarrierError(f"{barrier.family}: barrier not bounded by E={energy:g} in window")
    f = lambda x: barrier.evaluate(x) - energy  # noqa: E731
    j = int(left[-1])
    r1 = brentq(f, xs[j], xs[j + 1], xtol=1e-14)
    k = i + int(right[0])
    r2 = brentq(f, xs[k - 1], xs[k], xtol=1e-14)
    return float(r1), float(r2)


def tunnel(
    barrier: Potential, energy: float, r1: float | None = None, r2: float | None = None
) -> BarrierResult:
    """Transmission through an arbitrary barrier at energy ``energy`` > 0."""
    if not energy > 0:
        raise DomainError("tunneling energy must be positive")
    if r1 is None or r2 is None:
        r1, r2 = barrier_turning_points(barrier, energy)
    m1 = barrier.scale.m1
    K = m1 * math.sqrt(energy)
    T_wkb, g = transmission_wkb(barrier, energy, r1, r2)
    if r2 > r1:
        val, _ = quad(
            lambda x: math.sqrt(abs(barrier.evaluate(x))), r1, r2, limit=400, epsabs=1e-13, epsrel=1e-12
        )
    else:
        val = 0.0
    P = m1 * val
    d = r2 - r1
    return BarrierResult(K=K, d=d, P=P, T_new=transmission_new(K, d, P), T_wkb=T_wkb, g=g)


# -- cold emission -------------------------------------------------------------


def cold_emission(
    work_function: float, field: float, electron_mc2: float | None = None
) -> BarrierResult:
    """Triangular barrier W − eεx with W in eV and the field in V/cm.

    K = i·m1√W and P = i·(2/3)m1·W^{3/2}/(eε), so the transmission becomes
    2/(cos(2|K|d) + cosh(2|P|)); the WKB exponent is g = (2/3)m1·W^{3/2}/(eε).
    """
    if not (work_function > 0 and field > 0):
        raise DomainError("work function and field must be positive")
    mc2 = (electron_mc2 if electron_mc2 is not None else ELECTRON_MC2) * 1e6
    sc = scale_constants(mc2, "atomic-eV-nm")
    e_field = field_v_per_cm_to_v_per_nm(field)  # eε in eV/nm
    d = work_function / e_field
    K = sc.m1 * math.sqrt(work_function)
    P = 2.0 / 3.0 * sc.m1 * work_function**1.5 / e_field
    g = P
    return BarrierResult(
        K=K,
        d=d,
        P=P,
        T_new=transmission_new(K, d, P, Branch.IMAGINARY, Branch.IMAGINARY),
        T_wkb=transmission_wkb_from_exponent(g),
        g=g,
        K_branch=Branch.IMAGINARY,
        P_branch=Branch.IMAGINARY,
    )


# -- alpha decay ---------------------------------------------------------------


@dataclass(frozen=True)
class AlphaDecayCase:
    """Inputs and (once solved) derived geometry and half-lives of one emitter.

    Lengths are in fm, energies in MeV and times in seconds.
    """

    Z: int
    A: int
    E_alpha: float
    ell: int = 0
    R0: float = 1.25
    U0: float = 40.0
    mass_model: str = "atomic"
    # geometry
    mu: float | None = None
    b: float | None = None
    c: float | None = None
    R_c: float | None = None
    a: float | None = None
    r_m: float | None = None
    r_m_method: str | None = None
    r1: float | None = None
    r2: float | None = None
    r3: float | None = None
    r11: float | None = None
    r12: float | None = None
    d0: float | None = None
    E0: float | None = None
    # outputs
    K: float | None = None
    d: float | None = None
    P_new: float | None = None
    P_wkb: float | None = None
    T_new: float | None = None
    T_wkb: float | None = None
    f: float | None = None
    lambda_new: float | None = None
    lambda_wkb: float | None = None
    t_half_new: float | None = None
    t_half_wkb: float | None = None

    @property
    def t_half_new_years(self) -> float:
        return self.t_half_new / YEAR_SECONDS

    @property
    def t_half_wkb_years(self) -> float:
        return self.t_half_wkb / YEAR_SECONDS

    @property
    def t_half_new_days(self) -> float:
        return self.t_half_new / DAY_SECONDS

    @property
    def t_half_wkb_days(self) -> float:
        return self.t_half_wkb / DAY_SECONDS


def alpha_reduced_mass(Z: int, A: int, model: str = "atomic") -> float:
    """Reduced mass (MeV) of the alpha particle and the daughter (Z−2, A−4)."""
    return reduced_mass(nuclide_mass(2, 4, model), nuclide_mass(Z - 2, A - 4, model))


def _cardano_rm(a: float, U0: float, c: float) -> complex:
    """Cardano root of a·r³ − U0·r − c = 0 evaluated in complex arithmetic.

    With X = [9a²c + √(3a³(27ac² − 4U0³))]^{1/3} the root is
    (2·3^{1/3}·a·U0 + 2^{1/3}·X²)/(6^{2/3}·a·X).
    """
    X = (9 * a * a * c + cmath.sqrt(3 * a**3 * (27 * a * c * c - 4 * U0**3))) ** (1 / 3)
    return (2 * 3 ** (1 / 3) * a * U0 + 2 ** (1 / 3) * X * X) / (6 ** (2 / 3) * a * X)


def alpha_geometry(case: AlphaDecayCase) -> AlphaDecayCase:
    """Fill in the potential parameters and turning radii of an alpha emitter."""
    Z, A, E, ell, R0, U0 = case.Z, case.A, case.E_alpha, case.ell, case.R0, case.U0
    if not (A > 4 and Z > 2 and E > 0 and U0 > 0 and R0 > 0 and ell >= 0):
        raise DomainError("alpha decay needs A > 4, Z > 2, E_alpha > 0, U0 > 0, R0 > 0, ℓ >= 0")
    e2 = unit_system("nuclear-MeV-fm").e2
    mu = alpha_reduced_mass(Z, A, case.mass_model)
    sc = scale_constants(mu, "nuclear-MeV-fm")
    Mh = sc.Mh
    b = Mh * ell * (ell + 1)
    c = 2 * (Z - 2) * e2
    R_c = R0 * (4 ** (1 / 3) + (A - 4) ** (1 / 3))
    a = (U0 * R_c**2 - b) / R_c**4
    if not a > 0:
        raise DomainError(f"oscillator strength a = {a!r} is not positive")
    s = E + U0
    disc = s * s - 4 * a * b
    if disc < 0:
        raise DomainError(f"no inner well: (E+U0)² − 4ab = {disc!r} < 0")
    r1 = math.sqrt((s + math.sqrt(disc)) / (2 * a))
    r3 = math.sqrt(2 * b / (s + math.sqrt(disc))) if b > 0 else 0.0
    r2 = (c + math.sqrt(c * c + 4 * b * E)) / (2 * E)

    inner = lambda r: -U0 + a * r * r + b / (r * r)  # noqa: E731
    outer = lambda r: c / r + b / (r * r)  # noqa: E731
    rm_c = _cardano_rm(a, U0, c)
    r_m, method = rm_c.real, "closed-form"
    ok = abs(rm_c.imag) < 1e-9 * abs(rm_c) and r1 < r_m < r2
    if ok:
        ok = abs(inner(r_m) - outer(r_m)) <= 1e-8 * abs(outer(r_m))
    if not ok:
        cubic = lambda r: a * r**3 - U0 * r - c  # noqa: E731
        if cubic(r1) * cubic(r2) > 0:
            raise ConvergenceError(f"no real matching radius r_m in ({r1:g}, {r2:g})")
        r_m, method = brentq(cubic, r1, r2, xtol=1e-14, rtol=4 * np.finfo(float).eps), "numeric"
    if not (r3 < r1 < r_m < r2):
        raise DomainError(f"alpha geometry out of order: r3={r3}, r1={r1}, r_m={r_m}, r2={r2}")

    rad = 4 * a * b - 16 * a * Mh - 4 * math.sqrt(a * b) * U0 + U0 * U0
    if rad < 0:
        raise DomainError(f"ground-state radicand {rad!r} < 0")
    E0 = math.sqrt(a * b) - 0.5 * (U0 + math.sqrt(rad))
    s0 = E0 + U0
    disc0 = max(s0 * s0 - 4 * a * b, 0.0)
    r12 = math.sqrt((s0 + math.sqrt(disc0)) / (2 * a))
    r11 = math.sqrt(2 * b / (s0 + math.sqrt(disc0))) if b > 0 else 0.0
    return replace(
        case,
        mu=mu, b=b, c=c, R_c=R_c, a=a, r_m=float(r_m), r_m_method=method,
        r1=r1, r2=r2, r3=r3, r11=r11, r12=r12, d0=r12 - r11, E0=E0,
    )


def oscillator_area(a: float, b: float, r: float) -> float:
    """Antiderivative of √(a r² + b/r²)."""
    s = math.sqrt(a * r**4 + b)
    if b == 0:
        return 0.5 * s
    rb = math.sqrt(b)
    return 0.5 * (s - rb * math.log(2 * (rb + s) / (r * r)))


def coulomb_area(c: float, b: float, r: float) -> float:
    """Antiderivative of √(c/r + b/r²) for c ≥ 0, b ≥ 0.

    2√(cr+b) − √b·ln[(√(cr+b)+√b)/(√(cr+b)−√b)], i.e. the arccoth form.
    """
    w = math.sqrt(c * r + b)
    if b == 0:
        return 2 * w
    rb = math.sqrt(b)
    if c == 0:
        return rb * math.log(r)
    # w − √b = c·r/(w + √b) keeps the log accurate when c·r ≪ b
    return 2 * w - rb * (2 * math.log(w + rb) - math.log(c * r))


def alpha_half_life(case: AlphaDecayCase) -> AlphaDecayCase:
    """Transmission coefficients and half-lives (seconds) for a solved geometry."""
    if case.r_m is None:
        case = alpha_geometry(case)
    sc = scale_constants(case.mu, "nuclear-MeV-fm")
    m1 = sc.m1
    a, b, c, E = case.a, case.b, case.c, case.E_alpha
    r1, r2, r3, rm = case.r1, case.r2, case.r3, case.r_m
    P_new = m1 * (
        oscillator_area(a, b, rm) - oscillator_area(a, b, r1)
        + coulomb_area(c, b, r2) - coulomb_area(c, b, rm)
    )
    w1, _ = quad(lambda r: math.sqrt(max(a * r * r + b / (r * r) - E, 0.0)), r1, rm,
                 limit=200, epsabs=1e-13, epsrel=1e-12)
    w2, _ = quad(lambda r: math.sqrt(max(c / r + b / (r * r) - E, 0.0)), rm, r2,
                 limit=200, epsabs=1e-13, epsrel=1e-12)
    P_wkb = m1 * (w1 + w2)
    K = m1 * math.sqrt(E)
    d = r2 - r1
    T_new = transmission_new(K, d, P_new)
    T_wkb = transmission_wkb_from_exponent(P_wkb)
    # assault frequency v/(2(r1 − r3)) with v from the kinetic energy E − E0
    v = C_LIGHT * math.sqrt(2 * (E - case.E0) / case.mu)
    f = v / (2 * (r1 - r3))
    lam_new, lam_wkb = f * T_new, f * T_wkb
    return replace(
        case,
        K=K, d=d, P_new=P_new, P_wkb=P_wkb, T_new=T_new, T_wkb=T_wkb, f=f,
        lambda_new=lam_new, lambda_wkb=lam_wkb,
        t_half_new=HALF_LIFE_LN2 / lam_new, t_half_wkb=HALF_LIFE_LN2 / lam_wkb,
    )


@dataclass(frozen=True)
class GridScanResult:
    R0: float
    U0: float
    case: AlphaDecayCase
    log_ratio: float
    cells: int


def grid_scan(
    case: AlphaDecayCase,
    t_exp_seconds: float,
    R0_values: Iterable[float] | None = None,
    U0_values: Iterable[float] | None = None,
    method: str = "new",
) -> GridScanResult:
    """Best (R0, U0) cell minimising |ln(t_calc/t_exp)|; ties go to the smaller (R0, U0)."""
    if method not in ("new", "wkb"):
        raise DomainError("method must be 'new' or 'wkb'")
    R0s = list(R0_values) if R0_values is not None else [round(1.10 + 0.01 * i, 2) for i in range(51)]
    U0s = list(U0_values) if U0_values is not None else [float(u) for u in range(30, 51)]
    best = None
    count = 0
    for R0 in sorted(R0s):
        for U0 in sorted(U0s):
            try:
                res = alpha_half_life(replace(case, R0=R0, U0=U0, r_m=None))
            except (DomainError, ConvergenceError):
                continue
            count += 1
            t = res.t_half_new if method == "new" else res.t_half_wkb
            score = abs(math.log(t / t_exp_seconds))
            if best is None or score < best[0]:
                best = (score, R0, U0, res)
    if best is None:
        raise ConvergenceError("no (R0, U0) grid cell produced a valid alpha geometry")
    return GridScanResult(R0=best[1], U0=best[2], case=best[3], log_ratio=best[0], cells=count)
