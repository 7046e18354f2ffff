import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravnano.core import PhysicalConstants
from gravnano.lattice import (
    SingularPairError,
    generate_lattice_sphere,
    lattice_pair_energy,
    normalized_profile,
)

U = PhysicalConstants(G=1.0, hbar=1.0)


@pytest.fixture(scope="module")
def n1():
    return generate_lattice_sphere(5.0, 1.0)


def brute_count(r):
    n = int(math.floor(r))
    return sum(
        1
        for k in range(-n, n + 1)
        for l in range(-n, n + 1)
        for m in range(-n, n + 1)
        if k * k + l * l + m * m <= r * r * (1 + 1e-12)
    )


@pytest.mark.parametrize("r,count", [(5, 515), (10, 4169), (0.5, 1), (0.0, 1), (1.0, 7)])
def test_counts(r, count):
    assert generate_lattice_sphere(r * 1e-10, 1e-10).count == count


@pytest.mark.parametrize("r", [1, 2, 3.5, 7, 9.9, 12])
def test_count_matches_brute_force(r):
    assert generate_lattice_sphere(float(r), 1.0).count == brute_count(r)


def test_points_sorted_unique_and_inside(n1):
    pts = [tuple(p) for p in n1.points]
    assert pts == sorted(set(pts))
    assert np.all(np.sqrt((n1.points**2).sum(axis=1)) <= 5.0 + 1e-9)


def test_points_immutable(n1):
    with pytest.raises(ValueError):
        n1.points[0, 0] = 99


def test_invalid_inputs():
    with pytest.raises(ValueError):
        generate_lattice_sphere(1.0, 0.0)
    with pytest.raises(ValueError):
        generate_lattice_sphere(-1.0, 1.0)


def test_single_point():
    lat = generate_lattice_sphere(0.5, 1.0)
    assert lattice_pair_energy(lat, (0.0, 0.3, 0.4), 2.0, U) == pytest.approx(-4.0 / 0.5, rel=1e-15)


def test_two_point_hand_enumeration():
    # pairs of {(0,0,0),(1,0,0)} shifted by (0,0,1): two at distance 1, two at sqrt(2)
    from gravnano.lattice import LatticeSphere

    lat = LatticeSphere(np.array([[0, 0, 0], [1, 0, 0]]), 1.0, 1.0)
    expected = -(2.0 / 1.0 + 2.0 / math.sqrt(2.0))
    assert lattice_pair_energy(lat, (0.0, 0.0, 1.0), 1.0, U) == pytest.approx(expected, rel=1e-15)


def test_singular_pair_reported(n1):
    with pytest.raises(SingularPairError) as info:
        lattice_pair_energy(n1, (1.0, 0.0, 0.0), 1.0, U)
    i, j = info.value.pair
    assert np.array_equal(n1.points[j] + [1, 0, 0], n1.points[i])


def test_reflection_symmetry_exact(n1):
    t = np.array([0.31, -0.17, 0.05])
    assert lattice_pair_energy(n1, t, 1.0, U) == lattice_pair_energy(n1, -t, 1.0, U)


def test_cubic_symmetry(n1):
    t = np.array([0.31, 0.17, 0.05])
    ref = lattice_pair_energy(n1, t, 1.0, U)
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            v = lattice_pair_energy(n1, t[list(perm)] * signs, 1.0, U)
            assert v == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("direction", [(1, 0, 0), (1, 1, 0), (1, 2, 3)])
def test_far_field_is_point_mass(n1, direction):
    u = np.array(direction, float) / np.linalg.norm(direction)
    dist = 4.0 * 5.0 + 0.123
    N = n1.count
    assert lattice_pair_energy(n1, dist * u, 1.0, U) == pytest.approx(-(N**2) / dist, rel=1e-2)


def test_length_scaling(n1):
    a = lattice_pair_energy(n1, (0.3, 0.1, 0.0), 1.0, U)
    scaled = generate_lattice_sphere(10.0, 2.0)
    b = lattice_pair_energy(scaled, (0.6, 0.2, 0.0), 1.0, U)
    assert b == pytest.approx(a / 2.0, rel=1e-12)


def test_jobs_do_not_change_result():
    lat = generate_lattice_sphere(10.0, 1.0)
    t = (0.37, 0.0, 0.0)
    assert lattice_pair_energy(lat, t, 1.0, U, jobs=1) == lattice_pair_energy(lat, t, 1.0, U, jobs=3)


def test_profile_schmidt_column(n1):
    (p,) = normalized_profile(n1, [0.25], 1.0, U)
    v_d = -6.0 * n1.count**2 / (5.0 * 5.0)
    assert p.v_schmidt_over_vd == pytest.approx((-n1.count / 0.25) / v_d, rel=1e-14)
    assert p.n == 515


def test_profile_rejects_edges(n1):
    for x in (0.0, 1.0):
        with pytest.raises(ValueError):
            normalized_profile(n1, [x], 1.0, U)


def test_profile_plateau_narrows_with_size(n1):
    # deviation from the homogeneous value at fixed x is smaller for the larger crystal
    n2 = generate_lattice_sphere(10.0, 1.0)
    x = [0.1]
    d1 = normalized_profile(n1, x, 1.0, U)[0].v_over_vd - 1
    d2 = normalized_profile(n2, x, 1.0, U)[0].v_over_vd - 1
    assert 0 < d2 < d1


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.0, 0.9), st.floats(0.0, 0.9))
def test_energy_negative_for_generic_offsets(x, y, z):
    lat = generate_lattice_sphere(3.0, 1.0)
    t = np.array([x, y, z])
    # energy is finite and negative for any non-lattice shift
    assert lattice_pair_energy(lat, t, 1.0, U) < 0
