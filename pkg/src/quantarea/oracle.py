"""Independent verification kernels and literature baselines.

Everything here uses only the standard library so that tests can pair each
production routine with a check that shares no code with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

Func = Callable[[float], float]


class OracleError(ArithmeticError):
    """An oracle routine could not produce a trustworthy answer."""


@dataclass
class RootScanReport:
    roots: list[float] = field(default_factory=list)
    brackets: list[tuple[float, float]] = field(default_factory=list)
    evaluations: int = 0


def bisect(f: Func, lo: float, hi: float, rel: float = 1e-12, max_iter: int = 400) -> float:
    """Plain bisection; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise OracleError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel * max(1.0, abs(mid)) or mid in (lo, hi):
            return mid
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def root_scan(f: Func, lo: float, hi: float, step: float) -> RootScanReport:
    """Sample ``f`` every ``step`` on [lo, hi] and bisect every sign change."""
    if not lo < hi:
        raise OracleError("root_scan needs lo < hi")
    if not step > 0:
        raise OracleError("root_scan needs step > 0")
    report = RootScanReport()
    n = max(1, int(math.ceil((hi - lo) / step)))
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    prev_x, prev_f = None, None
    for x in xs:
        fx = f(x)
        report.evaluations += 1
        if not math.isfinite(fx):
            raise OracleError(f"non-finite value f({x!r}) = {fx!r}")
        if prev_x is not None:
            if fx == 0:
                report.roots.append(x)
                report.brackets.append((x, x))
            elif prev_f != 0 and (fx > 0) != (prev_f > 0):
                report.roots.append(bisect(f, prev_x, x))
                report.brackets.append((prev_x, x))
        elif fx == 0:
            report.roots.append(x)
            report.brackets.append((x, x))
        prev_x, prev_f = x, fx
    return report


def adaptive_simpson(
    f: Func, a: float, b: float, tol: float = 1e-10, max_depth: int = 48, smooth_ends: bool = False
) -> float:
    """Adaptive Simpson quadrature with an explicit work stack.

    ``smooth_ends`` substitutes x = a + (b−a)·s²(3−2s), whose Jacobian
    vanishes at both ends and tames square-root behaviour at turning points.
    """
    if a == b:
        return 0.0
    if smooth_ends:
        w = b - a
        g = lambda s: f(a + w * s * s * (3 - 2 * s)) * 6 * w * s * (1 - s)  # noqa: E731
        return adaptive_simpson(g, 0.0, 1.0, tol, max_depth)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6 * (fa + 4 * fm + fb)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = simpson(fa, fm, fb, b - a)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    worst = None
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = simpson(flo, fl, fmid, mid - lo)
        right = simpson(fmid, fr, fhi, hi - mid)
        delta = left + right - s
        if abs(delta) <= 15 * eps or hi - lo < 1e-15 * max(1.0, abs(mid)):
            total += left + right + delta / 15
        elif depth >= max_depth:
            worst = (lo, hi) if worst is None else worst
            total += left + right + delta / 15
        else:
            stack.append((lo, mid, flo, fl, fmid, left, eps / 2, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, eps / 2, depth + 1))
    if worst is not None:
        raise OracleError(f"adaptive Simpson hit depth {max_depth} on [{worst[0]}, {worst[1]}]")
    return sign * total


def fixed_point_bisect(
    d2: Func, seed: float, max_expansions: int = 60, rel: float = 1e-12
) -> float:
    """Smallest positive y with d2(y) = y found among geometric brackets around ``seed``.

    ``d2`` may raise for y where it is undefined; such points are skipped.
    """
    if not seed > 0:
        raise OracleError("seed must be positive")

    def h(y: float) -> float | None:
        try:
            v = d2(y) - y
        except (ArithmeticError, ValueError):
            return None
        return v if math.isfinite(v) else None

    samples: dict[int, float | None] = {0: h(seed)}
    for k in range(1, max_expansions + 1):
        samples[k] = h(seed * 2.0 ** (k / 2))
        samples[-k] = h(seed * 2.0 ** (-k / 2))
        keys = sorted(samples)
        for i, j in zip(keys, keys[1:]):
            hi_, hj = samples[i], samples[j]
            if hi_ is None or hj is None:
                continue
            if hi_ == 0:
                return seed * 2.0 ** (i / 2)
            if (hi_ > 0) != (hj > 0):
                g = lambda y: h(y)  # noqa: E731
                return bisect(g, seed * 2.0 ** (i / 2), seed * 2.0 ** (j / 2), rel=rel)
    raise OracleError(f"no fixed point bracket within {max_expansions} expansions of {seed}")


def fixed_point_energy(
    turning: Callable[[float], tuple[float, float]], Mh: float, q: float, seed_e: float
) -> float:
    """Energy magnitude solving |E| = Mh q²/d² with d taken from ``turning(|E|)``."""

    def d2(y: float) -> float:
        x1, x2 = turning(Mh * q * q / y)
        return (x2 - x1) ** 2

    y = fixed_point_bisect(d2, Mh * q * q / seed_e)
    return Mh * q * q / y


# -- literature baselines ----------------------------------------------------


class BaselineSource(str, Enum):
    BESSEL_ZERO = "bessel-zero"
    HO_SHELL = "ho-shell"
    HO_LS_PERTURBATION = "ho-ls-perturbation"
    SUSY_QM = "susy-qm"
    SUSY_WKB = "susy-wkb"
    STANDARD_WKB = "standard-wkb"
    QPI_SUSY_WKB = "qpi-susy-wkb"
    QPI_STANDARD_WKB = "qpi-standard-wkb"


@dataclass(frozen=True)
class BaselineEnergy:
    source: BaselineSource
    value: float


# zeros of spherical Bessel functions, keyed by (n, ℓ), as printed to 3 decimals
BESSEL_ZEROS: dict[tuple[int, int], float] = {
    (1, 0): 3.142,
    (1, 1): 4.493,
    (1, 2): 5.763,
    (2, 0): 6.283,
    (2, 1): 7.725,
    (2, 2): 9.095,
}


def susy_ground_energy(a: float, p: float, mass: float = 1.0, literal_gamma: bool = False) -> float:
    """Supersymmetric ground-state estimate for a|x|^p with ħ = 1.

    E0 = [0.8862·Γ(3/2 + 1/p)/Γ(1 + 1/p) · a^{2/p}/(2m)]^{p/(p+2)}. With
    ``literal_gamma`` the numerator Gamma takes (3 + 1/p)/2 instead; that
    variant matches the p = 1 comparison value but not the p = 2 one.
    """
    if not (a > 0 and p > 0 and mass > 0):
        raise OracleError("susy ground energy needs a, p, mass > 0")
    top = math.gamma((3 + 1 / p) / 2) if literal_gamma else math.gamma(1.5 + 1 / p)
    inner = 0.8862 * top / math.gamma(1 + 1 / p) / (2 * mass) * a ** (2 / p)
    return inner ** (p / (p + 2))


def baseline_energy(
    source: str | BaselineSource, n: int = 0, ell: int = 0, **params: float
) -> BaselineEnergy:
    """Comparison value from a literature formula.

    Units follow the comparison tables: ħ²/(2ma²) for ``bessel-zero``, ħω for
    the oscillator forms and for ``susy-qm`` (which also needs ``p``). The
    parabolic-well WKB forms take ``U0`` and ``a`` with ħ = m = 1, and the
    x²+1/x² forms take ``a`` and ``b``.
    """
    src = BaselineSource(source)
    if src is BaselineSource.BESSEL_ZERO:
        try:
            beta = BESSEL_ZEROS[(n, ell)]
        except KeyError:
            raise OracleError(f"no embedded Bessel zero for n={n}, ℓ={ell}") from None
        return BaselineEnergy(src, beta * beta)
    if src is BaselineSource.HO_SHELL:
        return BaselineEnergy(src, 2 * n + ell + 1.5)
    if src is BaselineSource.HO_LS_PERTURBATION:
        j = params["j"]
        c0 = params.get("c0", 0.015)
        shift = c0 / 4 * (j * (j + 1) - ell * (ell + 1) - 0.75)
        return BaselineEnergy(src, 2 * n + ell + 1.5 - shift)
    if src is BaselineSource.SUSY_QM:
        return BaselineEnergy(src, susy_ground_energy(params["a"], params["p"], params.get("mass", 1.0)))
    if src in (BaselineSource.SUSY_WKB, BaselineSource.STANDARD_WKB):
        U0, a = params["U0"], params["a"]
        pre = math.sqrt(2 * U0 / (a * a))
        if src is BaselineSource.SUSY_WKB:
            val = pre * (2 * n + math.sqrt(1 + 8 * a * a * U0)) - 2 * U0
        else:
            val = pre * (2 * n + 1 + math.sqrt(2 * a * a * U0)) - 2 * U0
        return BaselineEnergy(src, val)
    a, b = params["a"], params["b"]
    if src is BaselineSource.QPI_SUSY_WKB:
        return BaselineEnergy(src, math.sqrt(2 * a) * (2 * n + 1 + math.sqrt(0.25 + 2 * b)))
    return BaselineEnergy(src, math.sqrt(2 * a) * (2 * n + 1 + math.sqrt(2 * b)))
