"""Central-potential scattering through the three-zone picture.

Zone II (r2 < r < r1) holds the Coulomb plus centrifugal tail, zone III
(r3 < r < r2) the Saxon-Woods well with spin-orbit and centrifugal terms.
Lengths are fm, energies MeV and cross sections mb throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import (
    E2,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    QuantareaError,
    fm2_to_mb,
    mb_to_fm2,
    nuclide_mass,
    reduced_mass,
    scale_constants,
)
from .potentials import ScatteringZones
from .tunneling import coulomb_area


class Sign(str, Enum):
    """Which branch of the zone-II/III exponentials the amplitude uses."""

    LOWER = "lower"
    UPPER = "upper"


class ScatteringQuadratureError(QuantareaError):
    """The phase integral over one zone failed."""


@dataclass(frozen=True)
class ScatteringCase:
    """One projectile/target pair at one lab energy, plus the well parameters.

    ``J`` defaults to L + S. ``W0`` is an optional imaginary depth with the
    same Saxon-Woods shape; when non-zero the zone-III integrand follows the
    modulus rule (U_re² + U_im²)^{1/4}.
    """

    Zp: int
    Ap: int
    Zt: int
    At: int
    E_lab: float
    R0: float | None = None
    V0: float = 0.0
    a_c: float = 0.40
    L: int = 0
    S: float = 0.5
    J: float | None = None
    L0: int = 0
    W0: float = 0.0
    mass_model: str = "atomic"

    def __post_init__(self) -> None:
        if not self.E_lab > 0:
            raise DomainError(f"lab energy must be positive, got {self.E_lab!r} MeV")
        if self.R0 is not None and not self.R0 > 0:
            raise DomainError(f"R0 must be positive, got {self.R0!r} fm")
        if not self.a_c > 0:
            raise DomainError(f"diffuseness a_c must be positive, got {self.a_c!r} fm")
        if self.L < 0 or self.L0 < 0:
            raise DomainError("angular momenta must be non-negative")
        if self.J is None:
            object.__setattr__(self, "J", self.L + self.S)
        if abs(self.J - self.L) > self.S + 1e-12:
            raise DomainError(f"J={self.J} incompatible with L={self.L}, S={self.S}")

    @property
    def Mp(self) -> float:
        return nuclide_mass(self.Zp, self.Ap, self.mass_model)

    @property
    def Mt(self) -> float:
        return nuclide_mass(self.Zt, self.At, self.mass_model)

    @property
    def Mi(self) -> float:
        return reduced_mass(self.Mp, self.Mt)

    @property
    def E_r(self) -> float:
        return self.Mt * self.E_lab / (self.Mp + self.Mt)

    @property
    def C_c(self) -> float:
        return self.Zp * self.Zt * E2

    @property
    def b(self) -> float:
        return self.L * (self.L + 1) * scale_constants(self.Mi, "nuclear-MeV-fm").Mh

    @property
    def ls(self) -> float:
        J, L, S = self.J, self.L, self.S
        return 0.5 * (J * (J + 1) - L * (L + 1) - S * (S + 1))

    @property
    def m1(self) -> float:
        return scale_constants(self.Mi, "nuclear-MeV-fm").m1

    @property
    def K(self) -> float:
        return self.m1 * math.sqrt(self.E_r)

    @property
    def R_c(self) -> float:
        return self._r0() * self.At ** (1 / 3)

    def _r0(self) -> float:
        if self.R0 is None:
            raise DomainError("R0 is not set; supply it or use invert_R0")
        return self.R0

    def zones(self) -> ScatteringZones:
        r3, r2, r1 = zone_radii(self)
        return ScatteringZones(
            C_c=self.C_c, b=self.b, V0=self.V0, a_c=self.a_c, R_c=self.R_c, R_m=r2,
            ls=self.ls, mass=self.Mi, units="nuclear-MeV-fm",
        )


@dataclass(frozen=True)
class CrossSections:
    sign: Sign
    r3: float
    r2: float
    r1: float
    R_c: float
    K: float
    Y: float
    sigma_s: float
    sigma_r: float
    sigma_t: float

    def as_dict(self) -> dict[str, float | str]:
        return {
            "sign": self.sign.value, "R_c": self.R_c, "r3": self.r3, "r2": self.r2,
            "r1": self.r1, "K": self.K, "Y": self.Y, "sigma_s": self.sigma_s,
            "sigma_r": self.sigma_r, "sigma_t": self.sigma_t,
        }


def _coulomb_reach(C_c: float, b: float, E_r: float) -> float:
    return (C_c + math.sqrt(C_c * C_c + 4 * b * E_r)) / (2 * E_r)


def zone_radii(case: ScatteringCase) -> tuple[float, float, float]:
    """(r3, r2, r1): centrifugal edge, nuclear surface R_m, outer boundary."""
    E_r = case.E_r
    r3 = math.sqrt(case.b / E_r)
    r2 = case._r0() * (case.Ap ** (1 / 3) + case.At ** (1 / 3))
    r1 = r2 + _coulomb_reach(case.C_c, case.b, E_r)
    return r3, r2, r1


def total_cross_section(case: ScatteringCase) -> float:
    """σ_t = 4πr1² in mb; depends on R0 only, never on V0 or a_c."""
    r1 = zone_radii(case)[2]
    return fm2_to_mb(4 * math.pi * r1 * r1)


def _inner_integrand(case: ScatteringCase, zones: ScatteringZones):
    m1 = case.m1
    if case.W0 == 0:
        return lambda r: m1 * math.sqrt(abs(zones.inner(r)))

    def optical(r: float) -> float:
        im = -case.W0 / (1.0 + math.exp((r - zones.R_c) / zones.a_c))
        return m1 * (zones.inner(r) ** 2 + im * im) ** 0.25

    return optical


def _check_order(r3: float, r2: float) -> None:
    if r3 > r2:
        raise DomainError(
            f"zone ordering r3 <= r2 violated: centrifugal edge r3={r3:.6g} fm lies outside "
            f"the nuclear surface R_m={r2:.6g} fm"
        )


def y_integral(case: ScatteringCase, split: bool = True) -> float:
    """Y = m1∫_{r2}^{r1}√|U2| + m1∫_{r3}^{r2}√|U3|.

    The zone-II piece uses the Coulomb-centrifugal antiderivative; zone III
    is integrated numerically. ``split=False`` instead integrates the whole
    piecewise integrand over (r3, r1) in one pass.
    """
    r3, r2, r1 = zone_radii(case)
    _check_order(r3, r2)
    zones = case.zones()
    inner = _inner_integrand(case, zones)
    if not split:
        m1 = case.m1
        f = lambda r: inner(r) if r < r2 else m1 * math.sqrt(zones.outer(r))  # noqa: E731
        lo = max(r3, 1e-300)
        val, _ = quad(f, lo, r1, points=[r2] if lo < r2 < r1 else None,
                      limit=400, epsabs=1e-13, epsrel=1e-12)
        return float(val)
    outer = 0.0
    if r1 > r2 and (case.C_c > 0 or case.b > 0):
        outer = case.m1 * (coulomb_area(case.C_c, case.b, r1) - coulomb_area(case.C_c, case.b, r2))
    inner_val = 0.0
    if r2 > r3:
        try:
            inner_val, _ = quad(inner, max(r3, 1e-300), r2, limit=400, epsabs=1e-13, epsrel=1e-12)
        except (ArithmeticError, ValueError) as exc:
            raise ScatteringQuadratureError(
                f"zone III phase integral failed on ({r3}, {r2}) fm: {exc}"
            ) from exc
        if not math.isfinite(inner_val):
            raise ScatteringQuadratureError(f"zone III phase integral non-finite on ({r3}, {r2}) fm")
    return float(outer + inner_val)


def elastic_fraction(K: float, r1: float, r3: float, Y: float, sign: Sign | str = Sign.LOWER) -> float:
    """σ_s/(4πr1²), with every e^{4Kr} term divided by e^{4K·max(r1, r3)}."""
    sign = Sign(sign)
    top = max(r1, r3)
    e1 = math.exp(4 * K * (r1 - top))
    e3 = math.exp(4 * K * (r3 - top))
    e13 = math.exp(2 * K * (r1 + r3 - 2 * top))
    kr = 2 * K * r1
    P1 = 3 * e1 + 5 * e3 + 2 * e1 * (math.cos(kr) + math.sin(kr))
    P2 = -2 * e13 * (
        3 * math.cos(kr - 2 * Y) + 2 * math.cos(2 * Y) + math.sin(kr - 2 * Y) + math.sin(2 * Y)
    )
    if sign is Sign.LOWER:
        return 0.5 * (P1 + P2) / e1
    P3 = e1 + 5 * e3 - 2 * e13 * (2 * math.cos(2 * Y) + math.sin(2 * Y))
    return (P1 + P2) / P3


def cross_sections(case: ScatteringCase, sign: Sign | str = Sign.LOWER) -> CrossSections:
    """(σ_s, σ_r, σ_t) in mb; σ_r = σ_t − σ_s may come out negative."""
    sign = Sign(sign)
    r3, r2, r1 = zone_radii(case)
    Y = y_integral(case)
    K = case.K
    sigma_t = total_cross_section(case)
    sigma_s = sigma_t * elastic_fraction(K, r1, r3, Y, sign)
    return CrossSections(sign, r3, r2, r1, case.R_c, K, Y, sigma_s, sigma_t - sigma_s, sigma_t)


@dataclass(frozen=True)
class Amplitude:
    A1: complex
    C_s: complex
    C_g: complex
    r1: float
    theta: tuple[float, ...]
    dsigma_s: tuple[float, ...]
    dsigma_r: tuple[float, ...]

    @property
    def ratio(self) -> float:
        return abs(self.C_s) ** 2 / abs(self.C_g) ** 2


def incoming_log_amplitude(case: ScatteringCase, r1: float) -> float:
    """Q0(r1) = √(L0(L0+1))·ln r1; zero for L0 = 0."""
    return math.sqrt(case.L0 * (case.L0 + 1)) * math.log(r1) if case.L0 else 0.0


def amplitude_and_differential(
    case: ScatteringCase, sign: Sign | str = Sign.LOWER, theta: Sequence[float] | None = None
) -> Amplitude:
    """A1·e^{−Q1}, C_s, C_g and dσ/dθ (mb/rad) sampled on ``theta``.

    A1 is reported with the e^{−Q1(r1)} factor already applied, since only
    that product enters the scattered amplitude.
    """
    sign = Sign(sign)
    r3, _, r1 = zone_radii(case)
    Y = y_integral(case)
    K = case.K
    Q0 = incoming_log_amplitude(case, r1)
    lead = cmath.exp(complex(-Q0, -2 * K * r1))
    if sign is Sign.LOWER:
        A1 = 0.5 * (1 + 1j) * lead * (-1 + (2 - 1j) * cmath.exp(complex(2 * K * (r3 - r1), 2 * Y)))
    else:
        A1 = (1 + 1j) * lead / ((2 + 1j) * cmath.exp(complex(2 * K * (r3 - r1), -2 * Y)) - 1)
    C_g = complex(math.exp(-Q0), 0.0)
    C_s = A1 - C_g
    if theta is None:
        theta = np.linspace(0.0, math.pi, 181)
    th = tuple(float(t) for t in theta)
    ratio = abs(C_s) ** 2 / abs(C_g) ** 2
    area = fm2_to_mb(2 * math.pi * r1 * r1)
    ds = tuple(area * ratio * math.sin(t) for t in th)
    dr = tuple(area * (1.0 - ratio) * math.sin(t) for t in th)
    return Amplitude(A1, C_s, C_g, r1, th, ds, dr)


def invert_R0(sigma_t_exp: float, case: ScatteringCase) -> float:
    """R0 (fm) for which 4πr1² equals ``sigma_t_exp`` (mb)."""
    if not sigma_t_exp > 0:
        raise DomainError(f"sigma_t must be positive, got {sigma_t_exp!r} mb")
    r1 = math.sqrt(mb_to_fm2(sigma_t_exp) / (4 * math.pi))
    reach = _coulomb_reach(case.C_c, case.b, case.E_r)
    R0 = (r1 - reach) / (case.Ap ** (1 / 3) + case.At ** (1 / 3))
    if not R0 > 0:
        raise InfeasibleError(
            f"sigma_t={sigma_t_exp} mb gives r1={r1:.6g} fm, inside the Coulomb reach "
            f"{reach:.6g} fm; no positive R0"
        )
    return R0


# -- (V0, a_c) fit ---------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    V0: float
    a_c: float
    gate_V0: float
    gate_a_c: float
    gate_cells: int
    sigma_s: float
    sigma_r: float
    sigma_t: float


def _fast_y(case: ScatteringCase, V0s: np.ndarray, nodes: int = 256) -> np.ndarray:
    """Y for many depths at once with fixed Gauss-Legendre nodes (scan only)."""
    r3, r2, r1 = zone_radii(case)
    _check_order(r3, r2)
    outer = 0.0
    if r1 > r2 and (case.C_c > 0 or case.b > 0):
        outer = case.m1 * (coulomb_area(case.C_c, case.b, r1) - coulomb_area(case.C_c, case.b, r2))
    x, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * (r2 - r3) * (x + 1) + r3
    w = 0.5 * (r2 - r3) * w
    t = np.exp((r - case.R_c) / case.a_c)
    shape = 1.0 / (1.0 + t)
    cent = case.b / (r * r)
    so_shape = t / (case.a_c * (1.0 + t) ** 2)
    hc2 = scale_constants(case.Mi, "nuclear-MeV-fm").units.hbar_c ** 2
    so = -hc2 / (2 * case.Mi**2 * r) * so_shape * case.ls
    out = np.empty(len(V0s))
    for start in range(0, len(V0s), 4096):
        V = V0s[start:start + 4096, None]
        U = -V * shape + V * so + cent
        if case.W0:
            U = np.sqrt(U * U + (case.W0 * shape) ** 2)
        out[start:start + 4096] = outer + case.m1 * (np.sqrt(np.abs(U)) @ w)
    return out


def _fraction_array(K: float, r1: float, r3: float, Y: np.ndarray, sign: Sign) -> np.ndarray:
    """Vectorized ``elastic_fraction`` over many Y values."""
    top = max(r1, r3)
    e1 = math.exp(4 * K * (r1 - top))
    e3 = math.exp(4 * K * (r3 - top))
    e13 = math.exp(2 * K * (r1 + r3 - 2 * top))
    kr = 2 * K * r1
    P1 = 3 * e1 + 5 * e3 + 2 * e1 * (math.cos(kr) + math.sin(kr))
    P2 = -2 * e13 * (
        3 * np.cos(kr - 2 * Y) + 2 * np.cos(2 * Y) + np.sin(kr - 2 * Y) + np.sin(2 * Y)
    )
    if sign is Sign.LOWER:
        return 0.5 * (P1 + P2) / e1
    return (P1 + P2) / (e1 + 5 * e3 - 2 * e13 * (2 * np.cos(2 * Y) + np.sin(2 * Y)))


def fit_depth(
    case: ScatteringCase,
    sigma_s_exp: float,
    sigma_r_exp: float,
    sign: Sign | str = Sign.LOWER,
    V0_range: tuple[float, float] = (20.0, 60.0),
    V0_step: float = 0.0001,
    a_c_values: Iterable[float] | None = None,
    rel_consistency: float = 1e-3,
) -> FitResult:
    """Depth and diffuseness reproducing the measured (σ_s, σ_r).

    Stage one scans the grid and keeps the cells that pass the rounding gate
    (σ_r > 0 with equal round() and floor() against the target). Stage two
    refines V0 at the best gate cell's a_c. Because σ_s + σ_r = 4πr1² is fixed
    by R0, the two target equations carry one independent condition, so the
    refinement is a one-dimensional root solve for σ_r.
    """
    sign = Sign(sign)
    sigma_t = total_cross_section(case)
    if abs(sigma_s_exp + sigma_r_exp - sigma_t) > rel_consistency * sigma_t:
        raise InfeasibleError(
            f"targets sigma_s={sigma_s_exp} + sigma_r={sigma_r_exp} mb differ from "
            f"4*pi*r1^2={sigma_t:.6g} mb at R0={case.R0}"
        )
    if a_c_values is None:
        a_c_values = [round(0.40 + 0.01 * i, 2) for i in range(21)]
    lo, hi = V0_range
    n = int(round((hi - lo) / V0_step))
    V0s = lo + V0_step * np.arange(n + 1)
    r3, _, r1 = zone_radii(case)
    K = case.K
    best: tuple[float, float, float] | None = None
    gate_cells = 0
    for a_c in a_c_values:
        trial = replace(case, a_c=float(a_c))
        Y = _fast_y(trial, V0s)
        sr = sigma_t * (1.0 - _fraction_array(K, r1, r3, Y, sign))
        gate = (sr > 0) & (np.round(sr) == round(sigma_r_exp)) & (
            np.floor(sr) == math.floor(sigma_r_exp)
        )
        idx = np.flatnonzero(gate)
        gate_cells += len(idx)
        if len(idx):
            i = idx[np.argmin(np.abs(sr[idx] - sigma_r_exp))]
            key = (abs(float(sr[i]) - sigma_r_exp), float(V0s[i]), float(a_c))
            if best is None or key < best:
                best = key
    if best is None:
        raise InfeasibleError(
            f"no (V0, a_c) cell passes the rounding gate for sigma_r={sigma_r_exp} mb"
        )
    _, gV0, ga = best
    trial = replace(case, a_c=ga)

    def resid(v: float) -> float:
        return cross_sections(replace(trial, V0=v), sign).sigma_r - sigma_r_exp

    f0 = resid(gV0)
    V0 = gV0
    if f0 != 0:
        step = max(V0_step, 1e-6)
        for _ in range(60):
            for other in (gV0 - step, gV0 + step):
                if other > 0 and (resid(other) > 0) != (f0 > 0):
                    V0 = brentq(resid, min(gV0, other), max(gV0, other), xtol=1e-12, rtol=1e-14)
                    break
            else:
                step *= 2
                continue
            break
        else:
            raise ConvergenceError(f"could not bracket sigma_r={sigma_r_exp} mb near V0={gV0}")
    cs = cross_sections(replace(trial, V0=V0), sign)
    return FitResult(V0, ga, gV0, ga, gate_cells, cs.sigma_s, cs.sigma_r, cs.sigma_t)
