import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gravnano.core import PhysicalConstants, SphereSpec, unit_sphere
from gravnano.potentials import (
    ModelKind,
    PotentialModel,
    QuadratureError,
    nuclear_kernel,
    overlap_branch,
    schmidt_crossover,
    schmidt_kernel,
    spring_constant,
    structure_corrected_spring,
    v_eff_antiderivative,
    v_eff_sphere,
    v_eff_sphere_quadrature,
)

U = PhysicalConstants(G=1.0, hbar=1.0)
S = unit_sphere()


def model(kind, alpha=1.0, spec=S, constants=U):
    return PotentialModel(kind, spec, constants, alpha)


def test_quintic_at_R_exact():
    # -6/5 + 1/2 - 3/16 + 1/160 in exact rationals
    exact = Fraction(-6, 5) + Fraction(1, 2) - Fraction(3, 16) + Fraction(1, 160)
    assert exact == Fraction(-141, 160)
    assert v_eff_sphere(1.0, S, U) == pytest.approx(float(exact), rel=1e-15)


def test_origin_and_branch_point():
    assert v_eff_sphere(0.0, S, U) == pytest.approx(-1.2, rel=1e-15)
    assert v_eff_sphere(2.0, S, U) == pytest.approx(-0.5, rel=1e-15)
    assert v_eff_sphere(2.0 + 1e-12, S, U) == pytest.approx(-0.5, rel=1e-11)
    assert v_eff_sphere(5.0, S, U) == pytest.approx(-0.2, rel=1e-15)


def test_array_input_and_branch_labels():
    d = np.array([0.0, 1.0, 2.0, 3.0])
    v = v_eff_sphere(d, S, U)
    assert v.shape == (4,)
    assert list(overlap_branch(d, S)) == ["quintic", "quintic", "quintic", "coulomb"]
    assert overlap_branch(2.5, S) == "coulomb"


def test_negative_distance_rejected():
    with pytest.raises(ValueError):
        v_eff_sphere(-1e-3, S, U)
    with pytest.raises(ValueError):
        v_eff_sphere_quadrature(-1.0, S, U)


@pytest.mark.parametrize("d", [0.0, 0.1, 0.5, 0.7, 1.0, 1.5, 1.99, 2.0, 2.5, 5.0, 10.0])
def test_quadrature_oracle(d):
    exact = v_eff_sphere(d, S, U)
    assert v_eff_sphere_quadrature(d, S, U, subdivisions=10_000) == pytest.approx(exact, rel=1e-8)


def test_quadrature_si_units():
    spec = SphereSpec(1e-7, 2650.0)
    for d in (3e-8, 1.5e-7, 4e-7):
        assert v_eff_sphere_quadrature(d, spec) == pytest.approx(v_eff_sphere(d, spec), rel=1e-8)


def test_quadrature_flags_insufficient_subdivisions():
    with pytest.raises(QuadratureError):
        v_eff_sphere_quadrature(0.7, S, U, subdivisions=16, rtol=1e-14)
    with pytest.raises(ValueError):
        v_eff_sphere_quadrature(0.7, S, U, subdivisions=8)


def test_monotone_increasing():
    d = np.linspace(1e-4, 20.0, 20001)
    assert np.all(np.diff(v_eff_sphere(d, S, U)) > 0)


@given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3))
def test_monotone_property(x, y):
    if x == y:
        return
    lo, hi = sorted((x, y))
    assert v_eff_sphere(lo, S, U) < v_eff_sphere(hi, S, U)


def test_spring_piecewise_values():
    m = model(ModelKind.PIECEWISE_SPRING)
    assert spring_constant(1e-9, m) == pytest.approx(1.0, rel=1e-8)
    assert spring_constant(2.0, m) == pytest.approx(1 / 8, rel=1e-15)
    assert spring_constant(2.0 - 1e-12, m) == pytest.approx(1 / 8, rel=1e-10)
    assert spring_constant(4.0, m) == pytest.approx(1 / 64, rel=1e-15)


def test_spring_variants():
    assert spring_constant(3.0, model(ModelKind.HYPERBOLIC_ONLY, 1.05)) == pytest.approx(1 / (3.15**3), rel=1e-14)
    assert spring_constant(0.3, model(ModelKind.DIOSI_HARMONIC)) == pytest.approx(1.0, rel=1e-14)
    assert spring_constant(7.0, model(ModelKind.DIOSI_HARMONIC)) == spring_constant(0.3, model(ModelKind.DIOSI_HARMONIC))
    assert spring_constant(0.3, model(ModelKind.FREE)) == 0.0
    # exact homogeneous and piecewise share the same spring
    w = np.geomspace(1e-3, 1e2, 50)
    np.testing.assert_array_equal(
        spring_constant(w, model(ModelKind.EXACT_HOMOGENEOUS)), spring_constant(w, model(ModelKind.PIECEWISE_SPRING))
    )


@pytest.mark.parametrize("w", [0.0, -1.0])
def test_spring_rejects_nonpositive(w):
    with pytest.raises(ValueError):
        spring_constant(w, model(ModelKind.PIECEWISE_SPRING))


def test_alpha_validation():
    with pytest.raises(ValueError):
        model(ModelKind.HYPERBOLIC_ONLY, alpha=0.0)
    assert PotentialModel("piecewise", S, U).kind is ModelKind.PIECEWISE_SPRING


@given(st.floats(1e-4, 1e3))
def test_spring_positive(w):
    for kind in (ModelKind.PIECEWISE_SPRING, ModelKind.HYPERBOLIC_ONLY, ModelKind.STRUCTURE_CORRECTED_SPRING):
        assert spring_constant(w, model(kind)) > 0


@pytest.mark.parametrize(
    "kind,alpha",
    [
        (ModelKind.PIECEWISE_SPRING, 1.0),
        (ModelKind.PIECEWISE_SPRING, 1.05),
        (ModelKind.HYPERBOLIC_ONLY, 1.0),
        (ModelKind.HYPERBOLIC_ONLY, 1.05),
        (ModelKind.DIOSI_HARMONIC, 1.0),
        (ModelKind.NUCLEAR_HARMONIC, 1.0),
        (ModelKind.SCHMIDT_ATOMIC, 1.0),
        (ModelKind.STRUCTURE_CORRECTED_SPRING, 1.0),
    ],
)
@pytest.mark.parametrize("w", [0.5, 1.5, 3.0])
def test_antiderivative_matches_spring(kind, alpha, w):
    m = model(kind, alpha)
    h = 1e-5 * w
    fd = (v_eff_antiderivative(w + h, m) - v_eff_antiderivative(w - h, m)) / (2 * h)
    assert fd == pytest.approx(w * spring_constant(w, m), rel=1e-8)


def test_antiderivative_pins():
    m = model(ModelKind.PIECEWISE_SPRING)
    assert v_eff_antiderivative(2.0, m) == pytest.approx(-0.5, rel=1e-15)
    assert v_eff_antiderivative(1.0, m) == pytest.approx(-0.88125, rel=1e-15)
    assert -1e-6 < v_eff_antiderivative(1e7, m) < 0
    h = model(ModelKind.HYPERBOLIC_ONLY, 1.05)
    assert v_eff_antiderivative(0.5, h) == pytest.approx(-1 / (1.05**3 * 0.5), rel=1e-14)


def test_piecewise_spring_continuous_at_2R():
    m = model(ModelKind.PIECEWISE_SPRING)
    left = spring_constant(2.0 * (1 - 1e-13), m)
    right = spring_constant(2.0, m)
    assert left == pytest.approx(right, rel=1e-11)


def test_schmidt_kernel():
    spec = SphereSpec(1.0, 3 / (4 * math.pi), 0.1, 0.01, atom_mass=1.0)  # N = 1, m = M
    assert schmidt_kernel(0.3, spec, U) == pytest.approx(-1 / 0.3, rel=1e-14)
    with pytest.raises(ValueError):
        schmidt_kernel(0.0, spec, U)


def test_schmidt_crossover():
    spec = SphereSpec(1e-7, 2650.0)
    G = 6.674e-11
    d = schmidt_crossover(spec)
    assert d == pytest.approx(5 * spec.radius / (6 * spec.atom_count()), rel=1e-15)
    assert abs(schmidt_kernel(d, spec)) == pytest.approx(1.2 * G * spec.mass() ** 2 / spec.radius, rel=1e-12)


def test_schmidt_crossover_water_scale():
    water = SphereSpec(100e-9, 1000.0, atom_mass=18e-3 / 6e23)
    d = schmidt_crossover(water)
    assert 1e-16 < d < 1e-14


def test_nuclear_kernel():
    spec = SphereSpec(1e-7, 2650.0, nucleus_radius=1e-15)
    gnm2 = 6.674e-11 * spec.atom_count() * spec.atom_mass**2
    assert nuclear_kernel(0.0, spec) == pytest.approx(-1.2 * gnm2 / 1e-15, rel=1e-14)
    assert nuclear_kernel(2e-15, spec) == pytest.approx(-gnm2 / 2e-15, rel=1e-13)
    assert nuclear_kernel(1e-9, spec) == pytest.approx(-gnm2 / 1e-9, rel=1e-14)
    with pytest.raises(ValueError):
        nuclear_kernel(-1.0, spec)


def test_nuclear_kernel_single_atom_reduction():
    # N = 1 with m = M: identical to a homogeneous sphere of radius r_nucleus
    spec = SphereSpec(1.0, 3 / (4 * math.pi), 0.1, 0.01, atom_mass=1.0)
    small = SphereSpec(0.01, 3 / (4 * math.pi * 1e-6), 0.001, 0.0001)
    for d in (0.0, 0.005, 0.01, 0.02, 0.05):
        assert nuclear_kernel(d, spec, U) == pytest.approx(v_eff_sphere(d, small, U), rel=1e-12)


def test_structure_corrected_spring():
    # N = 1000 atoms, a0 = 1e-10, dx_zp = 5e-12: ratio (a0/dx)^3 / N = 8
    spec = SphereSpec(1e-8, 1000.0, nucleus_radius=5e-12, atom_mass=1000.0 * 4 / 3 * math.pi * 1e-24 / 1000)
    assert spec.atom_count() == pytest.approx(1000.0, rel=1e-12)
    total, k_hom, k_nuc = structure_corrected_spring(spec)
    assert k_nuc / k_hom == pytest.approx(8.0, rel=1e-12)
    assert total == pytest.approx(k_hom + k_nuc, rel=1e-15)
    assert k_hom == pytest.approx(6.674e-11 * spec.mass() ** 2 / 1e-30, rel=1e-12)


def test_structure_equality_point():
    # k_hom = k_nucleic at N = (a0 / dx_zp)^3 = 8000
    spec = SphereSpec(1e-8, 1000.0, nucleus_radius=5e-12, atom_mass=4 / 3 * math.pi * 1e-21 / 8000)
    _, k_hom, k_nuc = structure_corrected_spring(spec)
    assert k_nuc / k_hom == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        structure_corrected_spring(spec, bohr_radius=0.0)


def test_structure_ratio_decays_with_N():
    ratios = []
    for R in (1e-8, 1e-7, 1e-6):
        _, k_hom, k_nuc = structure_corrected_spring(SphereSpec(R, 2650.0))
        ratios.append(k_nuc / k_hom)
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[1] / ratios[2] == pytest.approx(1e3, rel=1e-10)
