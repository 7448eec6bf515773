"""Catalog of potential families.

Each family is an immutable dataclass that knows its domain, how to evaluate
U(x) and how to find the classical turning points where |U(x)| equals a given
energy magnitude. Families with an attractive (negative) well set
``energy_sign = -1``; confining wells measured from their bottom use +1.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, ClassVar, Mapping

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import (
    DomainError,
    NoTurningPointsError,
    ScaleConstants,
    scale_constants,
    unit_system,
)

_XTOL = 1e-14
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class TurningPair:
    """Classical turning points x1 < x2 of a bound state."""

    x1: float
    x2: float

    def __post_init__(self) -> None:
        if not self.x2 > self.x1:
            raise DomainError(f"turning points must satisfy x2 > x1, got ({self.x1}, {self.x2})")

    @property
    def x0(self) -> float:
        return (self.x1 + self.x2) / 2

    @property
    def d(self) -> float:
        return self.x2 - self.x1


@dataclass(frozen=True, kw_only=True)
class Potential:
    """Common behaviour for every family.

    ``mass`` is the rest energy of the moving particle in the energy unit of
    ``units`` (the bare mass in natural units).
    """

    units: str = "natural"
    mass: float = 1.0

    family: ClassVar[str] = ""
    radial: ClassVar[bool] = False
    symmetric: ClassVar[bool] = False
    energy_sign: ClassVar[int] = 1

    def __post_init__(self) -> None:
        unit_system(self.units)
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")

    @property
    def scale(self) -> ScaleConstants:
        return scale_constants(self.mass, self.units)

    # domain ---------------------------------------------------------------
    def domain(self) -> tuple[float, float]:
        """Open interval on which U is evaluated."""
        return (0.0, math.inf) if self.radial else (-math.inf, math.inf)

    def in_domain(self, x: float) -> bool:
        lo, hi = self.domain()
        return lo < x < hi

    def evaluate(self, x: float) -> float:
        if not self.in_domain(x):
            lo, hi = self.domain()
            raise DomainError(f"{self.family}: x={x!r} outside the domain ({lo}, {hi})")
        return self._u(x)

    def __call__(self, x: float) -> float:
        return self.evaluate(x)

    def _u(self, x: float) -> float:
        raise NotImplementedError

    # turning points ----------------------------------------------------------
    def turning_points(self, e_abs: float) -> TurningPair:
        """Roots of |U(x)| = e_abs that bracket the well minimum."""
        if not e_abs > 0:
            raise NoTurningPointsError(f"{self.family}: energy magnitude must be positive")
        return self._numeric_turning_points(e_abs)

    def well_minimum(self) -> tuple[float, float]:
        """Location and value of the minimum of U (numerical by default)."""
        lo, hi = self._search_window()
        xs = np.linspace(lo, hi, 801)[1:-1]
        us = np.array([self._u(float(x)) for x in xs])
        i = int(np.argmin(us))
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
        res = minimize_scalar(self._u, bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        x = float(res.x) if res.fun <= us[i] else float(xs[i])
        return x, self._u(x)

    def _search_window(self) -> tuple[float, float]:
        lo, hi = self.domain()
        if math.isinf(lo):
            lo = -self._length_scale() * 20
        if math.isinf(hi):
            hi = self._length_scale() * 20
        return lo, hi

    def _length_scale(self) -> float:
        return 1.0

    def _numeric_turning_points(self, e_abs: float) -> TurningPair:
        target = self.energy_sign * e_abs
        g = lambda x: self._u(x) - target  # noqa: E731
        xm, um = self.well_minimum()
        if um - target > 0:
            raise NoTurningPointsError(
                f"{self.family}: |E|={e_abs:g} lies below the well minimum U={um:g}"
            )
        lo, hi = self.domain()
        x1 = _search_root(g, xm, lo, -1, self._length_scale())
        x2 = _search_root(g, xm, hi, +1, self._length_scale())
        if x1 is None:
            if self.radial and lo == 0.0:
                x1 = 0.0
            else:
                raise NoTurningPointsError(f"{self.family}: no left turning point for |E|={e_abs:g}")
        if x2 is None:
            raise NoTurningPointsError(f"{self.family}: no right turning point for |E|={e_abs:g}")
        return TurningPair(x1, x2)

    # serialization -----------------------------------------------------------
    def params(self) -> dict[str, Any]:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if f.name not in ("units", "mass")
        }


def _search_root(
    g: Callable[[float], float], start: float, limit: float, direction: int, scale: float
) -> float | None:
    """Walk from ``start`` toward ``limit`` until g changes sign, then refine."""
    g0 = g(start)
    if g0 == 0:
        return start
    step = scale * 1e-3
    a = start
    for _ in range(400):
        b = a + direction * step
        if direction < 0 and b <= limit or direction > 0 and b >= limit:
            # approach the open endpoint geometrically
            b = limit - direction * 1e-12 * max(1.0, abs(limit)) if math.isfinite(limit) else b
            if math.isfinite(limit):
                try:
                    gb = g(b)
                except (ZeroDivisionError, OverflowError, ValueError):
                    return None
                if np.sign(gb) != np.sign(g0) and math.isfinite(gb):
                    return float(brentq(g, *sorted((a, b)), xtol=_XTOL, rtol=_RTOL))
                return None
        gb = g(b)
        if math.isfinite(gb) and np.sign(gb) != np.sign(g0):
            return float(brentq(g, *sorted((a, b)), xtol=_XTOL, rtol=_RTOL))
        a = b
        step *= 1.25
    return None


# -- one-dimensional families ----------------------------------------------------


@dataclass(frozen=True)
class PowerLaw(Potential):
    """U(x) = a|x|^p."""

    a: float
    p: float
    family: ClassVar[str] = "power-law"
    symmetric: ClassVar[bool] = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.a > 0 and self.p > 0):
            raise DomainError("power-law needs a > 0 and p > 0")

    def _u(self, x: float) -> float:
        return self.a * abs(x) ** self.p

    def turning_points(self, e_abs: float) -> TurningPair:
        if not e_abs > 0:
            raise NoTurningPointsError("power-law: energy magnitude must be positive")
        x = (e_abs / self.a) ** (1.0 / self.p)
        return TurningPair(-x, x)

    def well_minimum(self) -> tuple[float, float]:
        return 0.0, 0.0


@dataclass(frozen=True)
class Box(Potential):
    """Infinite square well: U = 0 on (0, width)."""

    width: float
    family: ClassVar[str] = "box"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.width > 0:
            raise DomainError("box width must be positive")

    def domain(self) -> tuple[float, float]:
        return 0.0, self.width

    def in_domain(self, x: float) -> bool:
        return 0.0 <= x <= self.width

    def _u(self, x: float) -> float:
        return 0.0

    def turning_points(self, e_abs: float) -> TurningPair:
        if not e_abs > 0:
            raise NoTurningPointsError("box: energy magnitude must be positive")
        return TurningPair(0.0, self.width)

    def well_minimum(self) -> tuple[float, float]:
        return self.width / 2, 0.0


@dataclass(frozen=True)
class CotSquared(Potential):
    """U(x) = U0·cot²(πx/a) on 0 < x < a; turning points found numerically."""

    U0: float
    a: float
    family: ClassVar[str] = "cot-squared"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.U0 > 0 and self.a > 0):
            raise DomainError("cot-squared needs U0 > 0 and a > 0")

    def domain(self) -> tuple[float, float]:
        return 0.0, self.a

    def _u(self, x: float) -> float:
        return self.U0 / math.tan(math.pi * x / self.a) ** 2

    def _length_scale(self) -> float:
        return self.a

    def well_minimum(self) -> tuple[float, float]:
        return self.a / 2, 0.0

    def turning_points(self, e_abs: float) -> TurningPair:
        if not e_abs > 0:
            raise NoTurningPointsError("cot-squared: energy magnitude must be positive")
        # smooth form of cot(πx/a) = sqrt(E/U0) on (0, a/2)
        s = math.sqrt(e_abs / self.U0)
        h = lambda x: math.cos(math.pi * x / self.a) - s * math.sin(math.pi * x / self.a)  # noqa: E731
        x1 = float(brentq(h, 0.0, self.a / 2, xtol=_XTOL, rtol=_RTOL))
        return TurningPair(x1, self.a - x1)


@dataclass(frozen=True)
class ParabolicWell(Potential):
    """U(x) = U0·(a/x − x/a)² on x > 0, minimum zero at x = a."""

    U0: float
    a: float
    family: ClassVar[str] = "parabolic-well"
    radial: ClassVar[bool] = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.U0 > 0 and self.a > 0):
            raise DomainError("parabolic-well needs U0 > 0 and a > 0")

    def _u(self, x: float) -> float:
        return self.U0 * (self.a / x - x / self.a) ** 2

    def well_minimum(self) -> tuple[float, float]:
        return self.a, 0.0

    def turning_points(self, e_abs: float) -> TurningPair:
        if not e_abs > 0:
            raise NoTurningPointsError("parabolic-well: energy magnitude must be positive")
        # U = E  <=>  x²/a² − s·x/a − 1 = 0 and its mirror, with s = sqrt(E/U0)
        s = math.sqrt(e_abs / self.U0)
        root = math.sqrt(s * s + 4.0)
        x1 = self.a * (root - s) / 2
        x2 = self.a * (root + s) / 2
        return TurningPair(x1, x2)


@dataclass(frozen=True)
class QuadraticPlusInverse(Potential):
    """U(x) = a·x² + b/x² (x ≠ 0); the turning pair is taken on the positive axis."""

    a: float
    b: float
    family: ClassVar[str] = "quadratic-plus-inverse"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.a > 0 and self.b >= 0):
            raise DomainError("quadratic-plus-inverse needs a > 0 and b >= 0")

    def in_domain(self, x: float) -> bool:
        return x != 0 and math.isfinite(x)

    def _u(self, x: float) -> float:
        return self.a * x * x + self.b / (x * x)

    def well_minimum(self) -> tuple[float, float]:
        return (self.b / self.a) ** 0.25, 2 * math.sqrt(self.a * self.b)

    def turning_points(self, e_abs: float) -> TurningPair:
        x_in, x_out = _quadratic_inverse_roots(self.a, self.b, e_abs, self.family)
        return TurningPair(x_in, x_out)


def _quadratic_inverse_roots(a: float, b: float, e: float, family: str) -> tuple[float, float]:
    disc = e * e - 4 * a * b
    if not e > 0 or disc < 0:
        raise NoTurningPointsError(
            f"{family}: |E|={e:g} below the well minimum 2*sqrt(ab)={2 * math.sqrt(a * b):g}"
        )
    delta = math.sqrt(disc)
    outer_sq = (e + delta) / (2 * a)
    # (e − δ)/(2a) rewritten as 2b/(e + δ) to avoid cancellation
    inner_sq = 2 * b / (e + delta)
    return math.sqrt(inner_sq), math.sqrt(outer_sq)


# -- radial families -----------------------------------------------------------


@dataclass(frozen=True)
class CoulombEffective(Potential):
    """U(r) = −a/r + b/r² (hydrogen-like: a = Z·e², b = ħ²ℓ(ℓ+1)/2m)."""

    a: float
    b: float = 0.0
    family: ClassVar[str] = "coulomb-effective"
    radial: ClassVar[bool] = True
    energy_sign: ClassVar[int] = -1

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.a > 0 and self.b >= 0):
            raise DomainError("coulomb-effective needs a > 0 and b >= 0")

    @classmethod
    def hydrogen_like(
        cls, Z: int, ell: int = 0, units: str = "atomic-eV-nm", mass: float | None = None
    ) -> CoulombEffective:
        from .core import ELECTRON_MC2

        u = unit_system(units)
        if mass is None:
            mass = ELECTRON_MC2 * 1e6 if u.name == "atomic-eV-nm" else ELECTRON_MC2
        b = scale_constants(mass, u).Mh * ell * (ell + 1)
        return cls(a=Z * u.e2, b=b, units=u.name, mass=mass)

    def _u(self, r: float) -> float:
        return -self.a / r + self.b / (r * r)

    def well_minimum(self) -> tuple[float, float]:
        if self.b == 0:
            return 0.0, -math.inf
        r = 2 * self.b / self.a
        return r, self._u(r)

    def turning_points(self, e_abs: float) -> TurningPair:
        # −a/r + b/r² = −E  <=>  E r² − a r + b = 0
        disc = self.a * self.a - 4 * self.b * e_abs
        if not e_abs > 0 or disc < 0:
            raise NoTurningPointsError(
                f"coulomb-effective: |E|={e_abs:g} deeper than the well minimum"
            )
        s = math.sqrt(disc)
        r2 = (self.a + s) / (2 * e_abs)
        r1 = 2 * self.b / (self.a + s)
        return TurningPair(r1, r2)


@dataclass(frozen=True)
class RadialBox(Potential):
    """Spherical box of radius ``radius`` with centrifugal term b/r²."""

    radius: float
    b: float = 0.0
    family: ClassVar[str] = "radial-box"
    radial: ClassVar[bool] = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.radius > 0 and self.b >= 0):
            raise DomainError("radial-box needs radius > 0 and b >= 0")

    def domain(self) -> tuple[float, float]:
        return 0.0, self.radius

    def in_domain(self, x: float) -> bool:
        return 0.0 < x <= self.radius

    def _u(self, r: float) -> float:
        return self.b / (r * r)

    def well_minimum(self) -> tuple[float, float]:
        return self.radius, self.b / self.radius**2

    def turning_points(self, e_abs: float) -> TurningPair:
        if not e_abs > 0:
            raise NoTurningPointsError("radial-box: energy magnitude must be positive")
        r1 = math.sqrt(self.b / e_abs)
        if r1 >= self.radius:
            raise NoTurningPointsError(
                f"radial-box: |E|={e_abs:g} below the centrifugal floor at the wall"
            )
        return TurningPair(r1, self.radius)


@dataclass(frozen=True)
class IsotropicHO(Potential):
    """U(r) = a·r² + b/r² (a = mω²/2, b = ħ²ℓ(ℓ+1)/2m)."""

    a: float
    b: float = 0.0
    family: ClassVar[str] = "isotropic-ho"
    radial: ClassVar[bool] = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.a > 0 and self.b >= 0):
            raise DomainError("isotropic-ho needs a > 0 and b >= 0")

    @classmethod
    def from_omega(
        cls, hbar_omega: float, ell: int, mass: float = 1.0, units: str = "natural"
    ) -> IsotropicHO:
        sc = scale_constants(mass, units)
        a = hbar_omega**2 / (4 * sc.Mh)
        return cls(a=a, b=sc.Mh * ell * (ell + 1), units=units, mass=mass)

    def _u(self, r: float) -> float:
        return self.a * r * r + self.b / (r * r)

    def well_minimum(self) -> tuple[float, float]:
        if self.b == 0:
            return 0.0, 0.0
        return (self.b / self.a) ** 0.25, 2 * math.sqrt(self.a * self.b)

    def turning_points(self, e_abs: float) -> TurningPair:
        if self.b == 0:
            if not e_abs > 0:
                raise NoTurningPointsError("isotropic-ho: energy magnitude must be positive")
            return TurningPair(0.0, math.sqrt(e_abs / self.a))
        r1, r2 = _quadratic_inverse_roots(self.a, self.b, e_abs, self.family)
        return TurningPair(r1, r2)


@dataclass(frozen=True)
class HOSpinOrbit(Potential):
    """U(r) = a·r² − C + b/r², a constant spin-orbit shift C on the oscillator."""

    a: float
    b: float
    c_lsj: float
    family: ClassVar[str] = "ho-spin-orbit"
    radial: ClassVar[bool] = True

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.a > 0 and self.b >= 0):
            raise DomainError("ho-spin-orbit needs a > 0 and b >= 0")

    @classmethod
    def from_omega(
        cls,
        hbar_omega: float,
        ell: int,
        j: float,
        c0: float = 0.015,
        mass: float = 1.0,
        units: str = "natural",
    ) -> HOSpinOrbit:
        """Oscillator with C = (c0/4)[j(j+1) − ℓ(ℓ+1) − 3/4]·ħω (c0 in units of ħω)."""
        sc = scale_constants(mass, units)
        cj = spin_orbit_cj(ell, j, c0)
        return cls(
            a=hbar_omega**2 / (4 * sc.Mh),
            b=sc.Mh * ell * (ell + 1),
            c_lsj=cj * hbar_omega,
            units=units,
            mass=mass,
        )

    def _u(self, r: float) -> float:
        return self.a * r * r - self.c_lsj + self.b / (r * r)

    def well_minimum(self) -> tuple[float, float]:
        if self.b == 0:
            return 0.0, -self.c_lsj
        return (self.b / self.a) ** 0.25, 2 * math.sqrt(self.a * self.b) - self.c_lsj

    def turning_points(self, e_abs: float) -> TurningPair:
        shifted = e_abs + self.c_lsj
        if self.b == 0:
            if not shifted > 0:
                raise NoTurningPointsError("ho-spin-orbit: energy below the well bottom")
            return TurningPair(0.0, math.sqrt(shifted / self.a))
        r1, r2 = _quadratic_inverse_roots(self.a, self.b, shifted, self.family)
        return TurningPair(r1, r2)


def spin_orbit_cj(ell: int, j: float, c0: float) -> float:
    """Dimensionless spin-orbit shift (c0/4)[j(j+1) − ℓ(ℓ+1) − 3/4]."""
    if abs(abs(j - ell) - 0.5) > 1e-12 or j < 0.5:
        raise DomainError(f"j={j} is not ℓ±1/2 for ℓ={ell}")
    return c0 / 4 * (j * (j + 1) - ell * (ell + 1) - 0.75)


@dataclass(frozen=True)
class SaxonWoodsComposite(Potential):
    """Saxon-Woods well with spin-orbit, centrifugal and (for protons) Coulomb terms.

    The spin-orbit term is −(ħ²/2μ)(1/r)·α·(V_so/a_so)·e^t/(1+e^t)² with
    t = (r − R_so)/a_so and α = [j(j+1) − ℓ(ℓ+1) − s(s+1)]/2. The Coulomb term
    is a uniformly charged sphere of radius R_co holding charge (Z−1)e.
    """

    V0: float
    R0: float
    a0: float
    V_so: float
    R_so: float
    a_so: float
    Z: int
    ell: int
    j: float
    R_co: float
    charged: bool = False
    spin: float = 0.5
    family: ClassVar[str] = "saxon-woods"
    radial: ClassVar[bool] = True
    energy_sign: ClassVar[int] = -1

    def __post_init__(self) -> None:
        super().__post_init__()
        if not (self.V0 > 0 and self.R0 > 0 and self.a0 > 0 and self.a_so > 0 and self.R_co > 0):
            raise DomainError("saxon-woods needs positive V0, R0, a0, a_so and R_co")
        if self.ell < 0:
            raise DomainError("ℓ must be non-negative")

    @property
    def alpha(self) -> float:
        j, ell, s = self.j, self.ell, self.spin
        return 0.5 * (j * (j + 1) - ell * (ell + 1) - s * (s + 1))

    def _length_scale(self) -> float:
        return self.R0

    def _search_window(self) -> tuple[float, float]:
        return 1e-6 * self.R0, 4 * self.R_co

    def central(self, r: float) -> float:
        return -self.V0 / (1.0 + math.exp((r - self.R0) / self.a0))

    def spin_orbit(self, r: float) -> float:
        if self.alpha == 0:
            return 0.0
        t = math.exp((r - self.R_so) / self.a_so)
        return -self.scale.Mh / r * self.alpha * self.V_so / self.a_so * t / (1.0 + t) ** 2

    def centrifugal(self, r: float) -> float:
        return self.scale.Mh * self.ell * (self.ell + 1) / (r * r)

    def coulomb(self, r: float) -> float:
        if not self.charged:
            return 0.0
        q = (self.Z - 1) * unit_system(self.units).e2
        x = abs(r)
        if x <= self.R_co:
            return q * (3 * self.R_co**2 - x * x) / (2 * self.R_co**3)
        return q / x

    def signed_value(self, r: float) -> float:
        """U at a signed argument; every term stays finite for r ≠ 0."""
        if r == 0:
            raise DomainError("saxon-woods: r = 0 is singular")
        return self.central(r) + self.spin_orbit(r) + self.centrifugal(r) + self.coulomb(r)

    def _u(self, r: float) -> float:
        return self.signed_value(r)


@dataclass(frozen=True)
class AlphaPiecewise(Potential):
    """Alpha-nucleus potential: oscillator well inside r_m, Coulomb tail outside.

    U(r) = −U0 + a·r² + b/r² for r ≤ r_m and c/r + b/r² beyond.
    """

    U0: float
    a: float
    b: float
    c: float
    r_m: float
    family: ClassVar[str] = "alpha-piecewise"
    radial: ClassVar[bool] = True

    def _length_scale(self) -> float:
        return self.r_m

    def _search_window(self) -> tuple[float, float]:
        return 1e-6 * self.r_m, self.r_m

    def inner_barrier(self, r: float) -> float:
        """a·r² + b/r², the barrier piece between r1 and r_m."""
        return self.a * r * r + self.b / (r * r)

    def outer_barrier(self, r: float) -> float:
        """c/r + b/r², the barrier piece between r_m and r2."""
        return self.c / r + self.b / (r * r)

    def _u(self, r: float) -> float:
        if r <= self.r_m:
            return -self.U0 + self.inner_barrier(r)
        return self.outer_barrier(r)


@dataclass(frozen=True)
class ScatteringZones(Potential):
    """Effective potential of the scattering zones.

    Inside r < R_m (zone III): Saxon-Woods + spin-orbit + b/r².
    Outside (zone II): C_c/r + b/r². ``mass`` is the reduced mass.
    """

    C_c: float
    b: float
    V0: float
    a_c: float
    R_c: float
    R_m: float
    ls: float = 0.0
    family: ClassVar[str] = "scattering-zones"
    radial: ClassVar[bool] = True

    def saxon_woods(self, r: float) -> float:
        return -self.V0 / (1.0 + math.exp((r - self.R_c) / self.a_c))

    def spin_orbit(self, r: float) -> float:
        if self.ls == 0 or self.V0 == 0:
            return 0.0
        t = math.exp((r - self.R_c) / self.a_c)
        dv_dr = self.V0 * t / (self.a_c * (1.0 + t) ** 2)
        hc = unit_system(self.units).hbar_c
        return -(hc * hc) / (2 * self.mass**2 * r) * dv_dr * self.ls

    def inner(self, r: float) -> float:
        return self.saxon_woods(r) + self.spin_orbit(r) + self.b / (r * r)

    def outer(self, r: float) -> float:
        return self.C_c / r + self.b / (r * r)

    def _u(self, r: float) -> float:
        return self.inner(r) if r < self.R_m else self.outer(r)


@dataclass(frozen=True)
class Tabulated(Potential):
    """Piecewise-linear interpolation of sampled (x, U) pairs."""

    xs: tuple[float, ...] = field(default=())
    us: tuple[float, ...] = field(default=())
    family: ClassVar[str] = "tabulated"

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))
        object.__setattr__(self, "us", tuple(float(u) for u in self.us))
        if len(self.xs) < 2 or len(self.xs) != len(self.us):
            raise DomainError("tabulated potential needs >= 2 matching (x, U) samples")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise DomainError("tabulated x values must be strictly increasing")

    @classmethod
    def from_csv(cls, path: str | Path, units: str = "natural", mass: float = 1.0) -> Tabulated:
        xs, us = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    x, u = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    continue  # header line
                xs.append(x)
                us.append(u)
        return cls(xs=tuple(xs), us=tuple(us), units=units, mass=mass)

    def domain(self) -> tuple[float, float]:
        return self.xs[0], self.xs[-1]

    def in_domain(self, x: float) -> bool:
        return self.xs[0] <= x <= self.xs[-1]

    def _length_scale(self) -> float:
        return (self.xs[-1] - self.xs[0]) / 100

    def _u(self, x: float) -> float:
        return float(np.interp(x, self.xs, self.us))

    def well_minimum(self) -> tuple[float, float]:
        i = int(np.argmin(self.us))
        return self.xs[i], self.us[i]

    def turning_points(self, e_abs: float) -> TurningPair:
        target = self.energy_sign * e_abs
        xm, um = self.well_minimum()
        if um > target:
            raise NoTurningPointsError(f"tabulated: |E|={e_abs:g} below the minimum {um:g}")
        i = self.xs.index(xm)
        x1 = x2 = None
        for k in range(i, 0, -1):
            if self.us[k - 1] >= target:
                x1 = _lerp_root(self.xs[k - 1], self.us[k - 1], self.xs[k], self.us[k], target)
                break
        for k in range(i, len(self.xs) - 1):
            if self.us[k + 1] >= target:
                x2 = _lerp_root(self.xs[k], self.us[k], self.xs[k + 1], self.us[k + 1], target)
                break
        if x1 is None or x2 is None:
            raise NoTurningPointsError(f"tabulated: |E|={e_abs:g} is not confined by the table")
        return TurningPair(x1, x2)


def _lerp_root(xa: float, ua: float, xb: float, ub: float, target: float) -> float:
    if ub == ua:
        return xa
    return xa + (target - ua) * (xb - xa) / (ub - ua)


# -- serialization -------------------------------------------------------------

FAMILIES: Mapping[str, type[Potential]] = {
    cls.family: cls
    for cls in (
        PowerLaw,
        Box,
        CotSquared,
        ParabolicWell,
        QuadraticPlusInverse,
        CoulombEffective,
        RadialBox,
        IsotropicHO,
        HOSpinOrbit,
        SaxonWoodsComposite,
        AlphaPiecewise,
        ScatteringZones,
        Tabulated,
    )
}

_CENTRIFUGAL_FAMILIES = {"coulomb-effective", "radial-box", "isotropic-ho", "ho-spin-orbit"}


def to_dict(p: Potential) -> dict[str, Any]:
    params = p.params()
    if isinstance(p, Tabulated):
        params = {"xs": list(p.xs), "us": list(p.us)}
    return {"family": p.family, "params": params, "units": p.units, "mass": p.mass}


def from_dict(doc: Mapping[str, Any], base_dir: str | Path | None = None) -> Potential:
    """Build a potential from ``{"family", "params", "units", "mass"}``.

    Families with a centrifugal b accept ``"ell"`` in place of ``"b"``. The
    tabulated family accepts ``"csv": path`` (relative to ``base_dir``).
    """
    if not isinstance(doc, Mapping) or "family" not in doc:
        raise DomainError("potential document needs a 'family' key")
    name = doc["family"]
    try:
        cls = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown potential family {name!r}; known: {sorted(FAMILIES)}") from None
    units = doc.get("units", "natural")
    mass = float(doc.get("mass", 1.0))
    params = dict(doc.get("params", {}))
    if name in _CENTRIFUGAL_FAMILIES and "ell" in params:
        ell = int(params.pop("ell"))
        params.setdefault("b", scale_constants(mass, units).Mh * ell * (ell + 1))
    if name == "tabulated" and "csv" in params:
        path = Path(params.pop("csv"))
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return Tabulated.from_csv(path, units=units, mass=mass)
    if name == "tabulated":
        params = {"xs": tuple(params.get("xs", ())), "us": tuple(params.get("us", ()))}
    try:
        return cls(**params, units=units, mass=mass)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name!r}: {exc}") from None


def to_json(p: Potential) -> str:
    return json.dumps(to_dict(p), sort_keys=True)


def from_json(text: str, base_dir: str | Path | None = None) -> Potential:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed potential JSON: {exc}") from None
    return from_dict(doc, base_dir)


def load_potential(path: str | Path) -> Potential:
    path = Path(path)
    return from_json(path.read_text(), base_dir=path.parent)


def evaluate(p: Potential, x: float) -> float:
    return p.evaluate(x)


def turning_points(p: Potential, e_abs: float) -> TurningPair:
    return p.turning_points(e_abs)
