import json
import math

import pytest

from quantarea.core import (
    ELECTRON_MC2,
    DomainError,
    Mode,
    QuantizationMode,
    constants_json,
    fm2_to_mb,
    mb_to_fm2,
    nuclide_mass,
    reduced_mass,
    scale_constants,
    unit_system,
)


def test_mode_q_values():
    assert QuantizationMode.ground().q == 2.0
    assert QuantizationMode.general(3).q == pytest.approx(3 * math.pi, rel=1e-15)
    assert QuantizationMode(Mode.SYMMETRIC, 2).q == pytest.approx(3 * math.pi, rel=1e-15)
    assert QuantizationMode(Mode.ANTISYMMETRIC, 2).q == pytest.approx(4 * math.pi, rel=1e-15)


@pytest.mark.parametrize(
    "text,label", [("ground", "ground"), ("g2", "g2"), ("S1", "s1"), ("a3", "a3"), ("general:4", "g4")]
)
def test_mode_parse_roundtrip(text, label):
    assert QuantizationMode.parse(text).label == label


@pytest.mark.parametrize("text", ["g0", "x1", "g", "s-1", "a1.5"])
def test_mode_parse_rejects(text):
    if text == "g0":
        assert QuantizationMode.parse(text).label == "ground"
        return
    with pytest.raises(DomainError):
        QuantizationMode.parse(text)


def test_parity_follows_n_for_general_modes():
    assert QuantizationMode.general(1).parity == "cos"
    assert QuantizationMode.general(2).parity == "sin"
    assert QuantizationMode(Mode.ANTISYMMETRIC, 1).parity == "sin"


def test_scale_constants_natural():
    sc = scale_constants(0.5)
    assert sc.Mh == pytest.approx(1.0)
    assert sc.m1 == pytest.approx(1.0)


def test_scale_constants_electron_atomic_units():
    sc = scale_constants(ELECTRON_MC2 * 1e6, "atomic-eV-nm")
    # ħ²c²/2mc² with ħc = 197.329 eV nm
    assert sc.Mh == pytest.approx(197.329**2 / (2 * 0.511003e6), rel=1e-12)
    assert sc.m1 * math.sqrt(sc.Mh) == pytest.approx(1.0, rel=1e-12)


def test_unit_systems_known():
    assert unit_system("nuclear-MeV-fm").e2 == pytest.approx(1.439976)
    with pytest.raises(DomainError):
        unit_system("furlongs")


def test_area_unit_conversion():
    assert fm2_to_mb(1.0) == 10.0
    assert mb_to_fm2(fm2_to_mb(3.7)) == pytest.approx(3.7)


def test_masses():
    assert nuclide_mass(2, 4, "mass-number") == pytest.approx(4 * 931.502)
    assert nuclide_mass(0, 1) == pytest.approx(939.565, rel=1e-5)
    assert reduced_mass(2.0, 2.0) == 1.0
    # unlisted nuclides fall back to A·M_u
    assert nuclide_mass(50, 120) == nuclide_mass(50, 120, "mass-number")
    with pytest.raises(DomainError):
        nuclide_mass(2, 4, "liquid-drop")


def test_constants_document_is_json():
    doc = json.loads(constants_json())
    assert "atomic_mass_u" in doc
    assert doc == json.loads(constants_json())
