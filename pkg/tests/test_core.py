import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gravnano.core import (
    InvalidSpecError,
    PhysicalConstants,
    Regime,
    RegimeLabel,
    SphereSpec,
    sphere_mass,
    unit_sphere,
)


def test_defaults():
    c = PhysicalConstants()
    assert c.G == 6.674e-11 and c.hbar == 1.0546e-34


@pytest.mark.parametrize("G,hbar", [(0.0, 1.0), (1.0, -1.0)])
def test_constants_positive(G, hbar):
    with pytest.raises(InvalidSpecError):
        PhysicalConstants(G=G, hbar=hbar)


def test_mass_silica_100nm():
    # rho * 4/3 pi R^3 evaluated by hand: 2650 * 4.18879e-21
    assert sphere_mass(SphereSpec(1e-7, 2650.0)) == pytest.approx(1.1100e-17, rel=1e-4)


def test_mass_gold_10um():
    assert SphereSpec(1e-5, 20000.0).mass() == pytest.approx(8.3776e-11, rel=1e-4)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(radius=0.0, density=1.0),
        dict(radius=-1e-7, density=1.0),
        dict(radius=1e-7, density=0.0),
        dict(radius=1e-7, density=math.nan),
        dict(radius=1e-7, density=1.0, lattice_constant=2e-7),
        dict(radius=1e-7, density=1.0, nucleus_radius=2e-10),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidSpecError):
        SphereSpec(**kwargs)


def test_unit_sphere():
    s = unit_sphere()
    assert s.mass() == pytest.approx(1.0, rel=1e-15)
    assert s.radius == 1.0


def test_json_roundtrip_field_names():
    s = SphereSpec(1e-7, 2650.0, 2e-10, 1e-15, 3e-26)
    d = json.loads(s.to_json())
    assert set(d) == {"radius_m", "density_kg_m3", "lattice_constant_m", "nucleus_radius_m", "atom_mass_kg"}
    assert SphereSpec.from_json(s.to_json()) == s
    c = PhysicalConstants(1.0, 2.0)
    assert set(c.to_dict()) == {"G", "hbar"}
    assert PhysicalConstants.from_dict(c.to_dict()) == c


def test_replace():
    s = SphereSpec(1e-7, 2650.0)
    assert s.replace(density=1000.0).density == 1000.0
    with pytest.raises(InvalidSpecError):
        s.replace(radius=1e-11)


def test_regime_label_order():
    RegimeLabel(Regime.ATOMIC, 1e-15, 1e-15, 1e-7)
    with pytest.raises(InvalidSpecError):
        RegimeLabel(Regime.ATOMIC, 1e-13, 1e-15, 1e-7)
    with pytest.raises(InvalidSpecError):
        RegimeLabel(Regime.ATOMIC, 1e-15, 1e-7, 1e-7)


@given(st.floats(1e-8, 1e-4), st.floats(100.0, 30000.0))
def test_mass_scales_as_cube(R, rho):
    a = SphereSpec(R, rho).mass()
    b = SphereSpec(10 * R, rho).mass()
    assert b / a == pytest.approx(1e3, rel=1e-13)


@given(st.floats(1e-8, 1e-4), st.floats(100.0, 30000.0), st.floats(1e-27, 1e-24))
def test_atom_count_consistent(R, rho, m):
    s = SphereSpec(R, rho, atom_mass=m)
    assert s.atom_count() * s.atom_mass == pytest.approx(s.mass(), rel=1e-12)
