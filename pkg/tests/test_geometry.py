import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwspherical.errors import CatalogError
from pwspherical.geometry import (
    SPACE_NAMES,
    SpaceDescriptor,
    catalog_space,
    expected_dimension,
    radius_bounds,
    spherical_lattice,
    weyl_reflect,
)

complex_values = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def harmonic_count(n, l):
    """Dimension of degree-l harmonic polynomials in n+1 variables (spherical harmonics on S^n)."""
    return math.comb(l + n, n) - (math.comb(l + n - 2, n) if l >= 2 else 0)


def test_catalog_names_round_trip():
    for name in SPACE_NAMES:
        space = catalog_space(name)
        assert space.name == name
        assert SpaceDescriptor.from_dict(space.to_dict()) == space


def test_unknown_space_lists_valid_names():
    with pytest.raises(CatalogError) as info:
        catalog_space("s9")
    assert "s2" in str(info.value) and "torus" in str(info.value)
    assert isinstance(info.value, KeyError)


def test_catalog_parameters():
    s2 = catalog_space("s2")
    assert (s2.jacobi_a, s2.jacobi_b, s2.rho_c) == (0.0, 0.0, 0.5)
    cp2 = catalog_space("cp2")
    assert (cp2.jacobi_a, cp2.jacobi_b, cp2.rho_c) == (1.0, 0.0, 1.0)
    torus = catalog_space("torus")
    assert torus.rho_c == 0.0 and torus.two_sided
    for name in ("s3", "s4", "s5"):
        n = int(name[1:])
        sp = catalog_space(name)
        assert sp.jacobi_a == sp.jacobi_b == (n - 2) / 2
        assert sp.rho_c == (n - 1) / 2


def test_descriptor_validation():
    with pytest.raises(ValueError):
        SpaceDescriptor("x", "rank-one-symmetric", 0.0, 0.0, 0.7)
    with pytest.raises(ValueError):
        SpaceDescriptor("x", "nonsense", 0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        SpaceDescriptor("x", "rank-one-symmetric", -1.0, 0.0, 0.0)


@given(complex_values)
def test_weyl_reflection_is_an_involution(lam):
    for name in SPACE_NAMES:
        space = catalog_space(name)
        twice = weyl_reflect(space, weyl_reflect(space, lam))
        assert abs(twice - lam) <= 1e-12 * (1 + abs(lam))


@given(st.floats(-50, 50))
def test_weyl_reflection_fixes_the_center(offset):
    space = catalog_space("s3")
    center = -space.rho_c
    assert weyl_reflect(space, center) == pytest.approx(center)
    # points equidistant from the center swap
    assert weyl_reflect(space, center + offset) == pytest.approx(center - offset, abs=1e-12)


def test_lattice_sidedness():
    assert list(spherical_lattice(catalog_space("s2"), 3)) == [0, 1, 2, 3]
    assert list(spherical_lattice(catalog_space("torus"), 2)) == [-2, -1, 0, 1, 2]
    assert list(spherical_lattice(catalog_space("s2"), 2.5)) == [0, 1, 2]
    with pytest.raises(ValueError):
        spherical_lattice(catalog_space("s2"), -1)


def test_radius_bounds_on_the_sphere():
    b = radius_bounds(catalog_space("s2"))
    assert b.as_tuple() == pytest.approx((math.pi / 2, math.pi, math.pi, math.pi))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sphere_dimensions_count_harmonic_polynomials(n):
    space = catalog_space(f"s{n}")
    for l in range(12):
        assert expected_dimension(space, l) == pytest.approx(harmonic_count(n, l))


def test_cp2_and_su2_dimensions():
    # (l, l) representations of SU(3); V_n (x) V_n of SU(2) x SU(2)
    for l in range(10):
        assert expected_dimension(catalog_space("cp2"), l) == pytest.approx((l + 1) ** 3)
        assert expected_dimension(catalog_space("su2-group"), l) == (l + 1) ** 2
    assert np.all([expected_dimension(catalog_space("torus"), l) == 1 for l in range(-3, 4)])
