"""Phase integral G(x) = m1∫√|U| dx and normalized bound-state wave functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .core import DomainError, QuantareaError
from .potentials import (
    Box,
    CotSquared,
    CoulombEffective,
    HOSpinOrbit,
    IsotropicHO,
    ParabolicWell,
    Potential,
    PowerLaw,
    QuadraticPlusInverse,
    RadialBox,
)
from .solver import BoundState


class QuadratureError(QuantareaError):
    """The phase integral could not be evaluated numerically."""


@dataclass(frozen=True)
class AreaFunction:
    """G(x) for one potential, anchored so that G(anchor) = 0.

    ``kind`` is ``closed-form`` when an antiderivative is known on the
    interval ``valid`` and the anchor lies inside it; otherwise G is built by
    adaptive quadrature from the anchor.
    """

    potential: Potential
    anchor: float
    kind: str
    antiderivative: Callable[[float], float] | None = field(default=None, repr=False)
    valid: tuple[float, float] = (-math.inf, math.inf)

    def integrand(self, x: float) -> float:
        return self.potential.scale.m1 * math.sqrt(abs(self.potential.evaluate(x)))

    def __call__(self, x: float) -> float:
        return self.evaluate(x)

    def evaluate(self, x: float) -> float:
        if isinstance(self.potential, Box):
            if not self.potential.in_domain(x):
                raise DomainError(f"box: x={x!r} outside [0, {self.potential.width}]")
            return 0.0
        lo, hi = self.valid
        if self.antiderivative is not None and lo <= x <= hi:
            return self.antiderivative(x) - self.antiderivative(self.anchor)
        return self._quadrature(float(x))

    def quadrature(self, x: float) -> float:
        """G(x) by numerical integration from the anchor, whatever ``kind`` is."""
        if isinstance(self.potential, Box):
            return 0.0
        return self._quadrature(float(x))

    def _quadrature(self, x: float) -> float:
        return _cached_quad(self, x)


@lru_cache(maxsize=4096)
def _cached_quad(g: AreaFunction, x: float) -> float:
    p = g.potential
    a = g.anchor
    for pt in (a, x):
        if not p.in_domain(pt):
            raise QuadratureError(f"{p.family}: G undefined at x={pt!r} (outside the domain)")
    if a == x:
        return 0.0
    val, err = quad(g.integrand, a, x, limit=400, epsabs=1e-13, epsrel=1e-12)
    if not math.isfinite(val):
        raise QuadratureError(f"{p.family}: non-finite phase integral between {a} and {x}")
    return float(val)


def _closed_form(p: Potential) -> tuple[Callable[[float], float] | None, tuple[float, float]]:
    m1 = p.scale.m1
    if isinstance(p, PowerLaw):
        c = m1 * math.sqrt(p.a) * 2 / (p.p + 2)
        e = (p.p + 2) / 2
        return (lambda x: math.copysign(c * abs(x) ** e, x)), (-math.inf, math.inf)
    if isinstance(p, CotSquared):
        c = m1 * math.sqrt(p.U0) * p.a / math.pi

        def g_cot(x: float) -> float:
            s = 1.0 if x <= p.a / 2 else -1.0
            return s * c * math.log(math.sin(math.pi * x / p.a))

        return g_cot, (0.0, p.a)
    if isinstance(p, ParabolicWell):
        c = m1 * math.sqrt(p.U0)
        f = lambda x: p.a * math.log(x) - x * x / (2 * p.a)  # noqa: E731
        fa = f(p.a)
        return (lambda x: c * (f(x) if x <= p.a else 2 * fa - f(x))), (0.0, math.inf)
    if isinstance(p, QuadraticPlusInverse):
        rb = math.sqrt(p.b)

        def g_qpi(x: float) -> float:
            ax = abs(x)
            s = math.sqrt(p.b + p.a * ax**4)
            val = s + (rb * (math.log(ax * ax) - math.log(p.b + rb * s)) if p.b > 0 else 0.0)
            return 0.5 * m1 * val if x > 0 else -0.5 * m1 * val

        return g_qpi, (-math.inf, math.inf)
    if isinstance(p, IsotropicHO):
        rb = math.sqrt(p.b)

        def g_ho(r: float) -> float:
            s = math.sqrt(p.a * r**4 + p.b)
            if p.b == 0:
                return 0.5 * m1 * s
            return 0.5 * m1 * (s - rb * math.log(2 * (rb + s) / (r * r)))

        return g_ho, (0.0, math.inf)
    if isinstance(p, HOSpinOrbit):
        if p.b == 0 or 2 * math.sqrt(p.a * p.b) <= p.c_lsj:
            return None, (0.0, 0.0)  # U changes sign: quadrature only
        a, b, C = p.a, p.b, p.c_lsj
        rb, ra = math.sqrt(b), math.sqrt(a)

        def g_hoso(r: float) -> float:
            w = math.sqrt(a * r**4 - C * r * r + b)
            return m1 * (
                0.5 * w
                - C / (4 * ra) * math.log(2 * w + (2 * a * r * r - C) / ra)
                - rb / 2 * math.log(2 * rb * w - C * r * r + 2 * b)
                + rb * math.log(r)
            )

        return g_hoso, (0.0, math.inf)
    if isinstance(p, CoulombEffective):
        a, b = p.a, p.b

        def g_coul(r: float) -> float:
            w = math.sqrt(max(a * r - b, 0.0))
            if b == 0:
                return 2 * m1 * w
            return 2 * m1 * (w - math.sqrt(b) * math.atan(w / math.sqrt(b)))

        return g_coul, ((b / a) if b > 0 else 0.0, math.inf)
    if isinstance(p, RadialBox):
        if p.b == 0:
            return (lambda r: 0.0), (0.0, p.radius)
        c = m1 * math.sqrt(p.b)
        return (lambda r: c * math.log(r)), (0.0, p.radius)
    return None, (0.0, 0.0)


def area_function(p: Potential, anchor: float | None = None) -> AreaFunction:
    """Build G for ``p``, anchored at ``anchor`` (0 for symmetric families by default)."""
    if anchor is None:
        if p.symmetric:
            anchor = 0.0
        else:
            raise DomainError(f"{p.family}: an anchor point is required for G")
    if isinstance(p, Box):
        return AreaFunction(p, anchor, "closed-form", lambda x: 0.0, (0.0, p.width))
    closed, valid = _closed_form(p)
    lo, hi = valid
    if closed is not None and lo <= anchor <= hi:
        try:
            closed(anchor)
        except (ValueError, ZeroDivisionError):
            closed = None
        if closed is not None:
            return AreaFunction(p, anchor, "closed-form", closed, valid)
    return AreaFunction(p, anchor, "quadrature")


def area_function_for(b: BoundState, p: Potential) -> AreaFunction:
    """G anchored at the state's centre (1D families) or inner turning point (radial)."""
    anchor = b.turning.x1 if p.radial else b.x0
    if p.symmetric:
        anchor = 0.0
    return area_function(p, anchor)


@dataclass(frozen=True)
class WaveSample:
    x: float
    value: complex
    parity: str


def _check_parity(parity: str) -> str:
    if parity not in ("cos", "sin"):
        raise DomainError(f"parity must be 'cos' or 'sin', got {parity!r}")
    return parity


def psi(b: BoundState, g: AreaFunction, x: float, parity: str | None = None) -> complex:
    """√(2/d)·{cos|sin}(K(x − x0))·exp(iG(x)) on the closed interval [x1, x2]."""
    parity = _check_parity(parity or b.mode.parity)
    x1, x2 = b.turning.x1, b.turning.x2
    slack = 1e-12 * max(1.0, abs(x1), abs(x2))
    if not (x1 - slack <= x <= x2 + slack):
        raise DomainError(f"x={x!r} outside the bound interval [{x1}, {x2}]")
    arg = b.K * (x - b.x0)
    amp = b.norm * (math.cos(arg) if parity == "cos" else math.sin(arg))
    phase = g.evaluate(x) if (x > 0 or not g.potential.radial) else 0.0
    return complex(amp * math.cos(phase), amp * math.sin(phase))


def radial_psi(
    b: BoundState, g: AreaFunction, r: float, parity: str | None = None, ylm: str = "Y00"
) -> complex:
    """F(r)/r; the angular factor ``ylm`` is a label only and is not evaluated."""
    if not r > 0:
        raise DomainError(f"radial wave function needs r > 0, got {r!r}")
    return psi(b, g, r, parity) / r


def normalization_integral(b: BoundState, g: AreaFunction, parity: str | None = None) -> float:
    """∫|ψ|² dx over [x1, x2] by adaptive quadrature."""
    parity = parity or b.mode.parity
    x1, x2 = b.turning.x1, b.turning.x2
    val, _ = quad(
        lambda x: abs(psi(b, g, x, parity)) ** 2, x1, x2, limit=200, epsabs=1e-13, epsrel=1e-12
    )
    return float(val)


def normalization_residual(b: BoundState, g: AreaFunction, parity: str | None = None) -> float:
    return abs(normalization_integral(b, g, parity) - 1.0)


def predicted_normalization_residual(q: float) -> float:
    """|sin(q)/q|: the cross term left by √(2/d) when q is not a multiple of π."""
    return abs(math.sin(q) / q)


def sample(
    b: BoundState, g: AreaFunction, points: int = 101, parity: str | None = None
) -> list[WaveSample]:
    parity = _check_parity(parity or b.mode.parity)
    x1, x2 = b.turning.x1, b.turning.x2
    xs = np.linspace(x1, x2, points)
    if g.potential.radial and x1 <= 0:
        xs[0] = x1 + (x2 - x1) * 1e-9
    return [WaveSample(float(x), psi(b, g, float(x), parity), parity) for x in xs]
