"""Unit systems, physical constants, quantization numbers and scale constants.

Every other module takes its constants from here. The numeric values live in
``data/constants.json`` so the CLI, the tests and the library share one source.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Mapping


class QuantareaError(Exception):
    """Base class for every error raised by the package."""


class DomainError(QuantareaError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NoTurningPointsError(DomainError):
    """The requested energy has no classical turning points in the well."""


class ConvergenceError(QuantareaError, RuntimeError):
    """A root or fixed point could not be bracketed or refined."""


class UnsupportedError(QuantareaError, NotImplementedError):
    """The requested combination has no implementation (e.g. no closed form)."""


class InfeasibleError(QuantareaError, ValueError):
    """An inversion or fit has no admissible solution."""


@lru_cache(maxsize=1)
def constants_document() -> Mapping[str, object]:
    """Return the parsed ``constants.json`` shipped with the package."""
    text = resources.files("quantarea").joinpath("data/constants.json").read_text()
    return json.loads(text)


def constants_json() -> str:
    """Canonical JSON text of the constants document (sorted keys)."""
    return json.dumps(constants_document(), indent=2, sort_keys=True) + "\n"


_C = constants_document()

HBAR_C: float = float(_C["hbar_c_MeV_fm"])
"""ħc in MeV·fm (numerically the same in eV·nm)."""
E2: float = float(_C["elementary_charge_sq_MeV_fm"])
"""e² in MeV·fm (numerically the same in eV·nm)."""
MASS_UNIT: float = float(_C["mass_unit_MeV"])
ELECTRON_MC2: float = float(_C["electron_mc2_MeV"])
C_LIGHT: float = float(_C["speed_of_light_fm_per_s"])
YEAR_SECONDS: float = float(_C["year_days"]) * 86400.0
DAY_SECONDS: float = 86400.0
FM2_TO_MB: float = float(_C["fm2_to_mb"])
ATOMIC_MASS_U: Mapping[str, float] = dict(_C["atomic_mass_u"])  # type: ignore[arg-type]


def fm2_to_mb(area_fm2: float) -> float:
    return area_fm2 * FM2_TO_MB


def mb_to_fm2(area_mb: float) -> float:
    return area_mb / FM2_TO_MB


def field_v_per_cm_to_v_per_nm(field: float) -> float:
    """Convert an electric field from V/cm to V/nm (so eε is in eV/nm)."""
    return field / 1e7


def field_v_per_nm_to_v_per_cm(field: float) -> float:
    return field * 1e7


@dataclass(frozen=True)
class UnitSystem:
    """A named unit system: energy and length units plus ħc.

    ``natural`` uses ħ = 1 and masses given directly (so ħc = 1).
    ``atomic-eV-nm`` measures energy in eV and length in nm.
    ``nuclear-MeV-fm`` measures energy in MeV and length in fm.
    """

    name: str
    energy_unit: str
    length_unit: str
    hbar_c: float
    e2: float

    def __post_init__(self) -> None:
        if not (self.hbar_c > 0 and self.e2 > 0):
            raise DomainError(f"unit system {self.name!r} needs positive hbar_c and e2")


NATURAL = UnitSystem("natural", "1", "1", 1.0, 1.0)
ATOMIC = UnitSystem("atomic-eV-nm", "eV", "nm", HBAR_C, E2)
NUCLEAR = UnitSystem("nuclear-MeV-fm", "MeV", "fm", HBAR_C, E2)

UNIT_SYSTEMS: Mapping[str, UnitSystem] = {u.name: u for u in (NATURAL, ATOMIC, NUCLEAR)}


def unit_system(name: str | UnitSystem) -> UnitSystem:
    if isinstance(name, UnitSystem):
        return name
    try:
        return UNIT_SYSTEMS[name]
    except KeyError:
        raise DomainError(
            f"unknown unit system {name!r}; expected one of {sorted(UNIT_SYSTEMS)}"
        ) from None


@dataclass(frozen=True)
class ScaleConstants:
    """The two scale constants derived from a mass.

    Attributes:
        mass: Rest energy mc² in the unit system's energy unit (or the bare
            mass in natural units).
        m1: sqrt(2m/ħ²), the wave-number scale: K = m1·sqrt(|E|).
        Mh: ħ²/(2m), so that |E| = Mh·q²/d².
        units: The unit system the numbers are expressed in.
    """

    mass: float
    m1: float
    Mh: float
    units: UnitSystem


def scale_constants(mass: float, units: str | UnitSystem = "natural") -> ScaleConstants:
    """Build m1 and Mh for a particle of rest energy ``mass``.

    Mh is computed first and m1 as its inverse square root, which keeps
    m1²·Mh equal to one up to a single rounding.
    """
    u = unit_system(units)
    if not mass > 0 or not math.isfinite(mass):
        raise DomainError(f"mass must be positive and finite, got {mass!r}")
    Mh = u.hbar_c**2 / (2.0 * mass)
    m1 = math.sqrt(2.0 * mass) / u.hbar_c
    return ScaleConstants(mass=mass, m1=m1, Mh=Mh, units=u)


class Mode(str, Enum):
    GROUND = "ground"
    GENERAL = "general"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


_MODE_PREFIX = {"g": Mode.GENERAL, "s": Mode.SYMMETRIC, "a": Mode.ANTISYMMETRIC}


@dataclass(frozen=True, order=True)
class QuantizationMode:
    """A quantization rule stored exactly as (mode, n); q is computed on demand."""

    mode: Mode
    n: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.GROUND:
            object.__setattr__(self, "n", 0)
        elif not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"quantum number n must be a positive integer, got {self.n!r}")

    @property
    def q(self) -> float:
        return q_value(self)

    @property
    def label(self) -> str:
        if self.mode is Mode.GROUND:
            return "ground"
        return f"{self.mode.value[0]}{self.n}"

    @property
    def parity(self) -> str:
        """'cos' for even states, 'sin' for odd ones.

        Ground and symmetric modes use cos. Antisymmetric modes use sin. For
        general modes the parity follows n: odd n is symmetric (cos), even n
        antisymmetric (sin).
        """
        if self.mode in (Mode.GROUND, Mode.SYMMETRIC):
            return "cos"
        if self.mode is Mode.ANTISYMMETRIC:
            return "sin"
        return "cos" if self.n % 2 else "sin"

    @classmethod
    def ground(cls) -> QuantizationMode:
        return cls(Mode.GROUND)

    @classmethod
    def general(cls, n: int) -> QuantizationMode:
        return cls(Mode.GENERAL, n)

    @classmethod
    def parse(cls, text: str) -> QuantizationMode:
        """Parse 'ground', 'g3', 's1', 'a2' (or 'general:3' style)."""
        t = text.strip().lower()
        if t in ("ground", "g0", "0"):
            return cls.ground()
        if ":" in t:
            name, _, num = t.partition(":")
            return cls(Mode(name), _parse_n(num, text))
        if t and t[0] in _MODE_PREFIX:
            return cls(_MODE_PREFIX[t[0]], _parse_n(t[1:], text))
        raise DomainError(f"cannot parse quantization mode {text!r}")


def _parse_n(num: str, text: str) -> int:
    try:
        n = int(num)
    except ValueError:
        raise DomainError(f"cannot parse quantization mode {text!r}") from None
    if n < 1:
        raise DomainError(f"quantum number must be >= 1 in {text!r}")
    return n


def q_value(mode: QuantizationMode) -> float:
    """Quantization number: 2 (ground), nπ, (2n−1)π or 2nπ."""
    if mode.mode is Mode.GROUND:
        return 2.0
    if mode.n < 1:
        raise DomainError(f"n must be >= 1, got {mode.n}")
    if mode.mode is Mode.GENERAL:
        return mode.n * math.pi
    if mode.mode is Mode.SYMMETRIC:
        return (2 * mode.n - 1) * math.pi
    return 2 * mode.n * math.pi


# -- masses -------------------------------------------------------------------

MASS_MODELS = ("atomic", "mass-number")

_ELEMENTS = {
    0: "n", 1: "H", 2: "He", 4: "Be", 6: "C", 8: "O", 14: "Si", 20: "Ca",
    29: "Cu", 82: "Pb", 84: "Po", 91: "Pa", 93: "Np", 95: "Am", 97: "Bk",
}


def nuclide_key(Z: int, A: int) -> str:
    if Z == 0 and A == 1:
        return "n"
    if Z == 1 and A == 1:
        return "p"
    symbol = _ELEMENTS.get(Z, f"Z{Z}")
    return f"{symbol}-{A}"


def nuclide_mass(Z: int, A: int, model: str = "atomic") -> float:
    """Rest energy (MeV) of nuclide (Z, A).

    ``mass-number`` returns A·M_u. ``atomic`` looks the nuclide up in the
    embedded atomic-mass table and falls back to A·M_u for nuclides that are
    not listed there.
    """
    if A < 1:
        raise DomainError(f"mass number must be >= 1, got {A}")
    if model == "mass-number":
        return A * MASS_UNIT
    if model != "atomic":
        raise DomainError(f"unknown mass model {model!r}; expected one of {MASS_MODELS}")
    u = ATOMIC_MASS_U.get(nuclide_key(Z, A))
    return (u if u is not None else float(A)) * MASS_UNIT


def reduced_mass(m_a: float, m_b: float) -> float:
    if m_a <= 0 or m_b <= 0:
        raise DomainError("masses must be positive")
    return m_a * m_b / (m_a + m_b)
