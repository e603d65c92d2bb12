import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from pwspherical.functions import ClassFunction
from pwspherical.groupcase import (
    GroupCoefficientTable,
    averaging_identity,
    char_inner,
    conjugacy_angle,
    group_extension,
    group_pw_check,
    group_ray,
    group_synthesize,
    group_table,
    group_transform,
    k_average,
    support_transfer_check,
    weyl_integrate,
)
from pwspherical.holo import fit_exponential_type
from pwspherical.special import character_eval

from oracles import bump, legendre_recurrence, su2_trace_angle


def haar_by_trace(fn):
    """Haar integral over SU(2) = S^3: x = Re tr / 2 has density (2/pi) sqrt(1 - x^2)."""
    return quad(lambda x: fn(2 * math.acos(x)) * math.sqrt(1 - x * x) * 2 / math.pi, -1, 1,
                epsabs=1e-14, limit=200)[0]


def test_haar_normalisation():
    assert weyl_integrate(ClassFunction.constant(1.0)) == pytest.approx(1.0, abs=1e-13)
    assert weyl_integrate(lambda th: character_eval(1, th) ** 2) == pytest.approx(1.0, abs=1e-13)
    assert abs(weyl_integrate(lambda th: character_eval(1, th) * character_eval(2, th))) <= 1e-13


def test_haar_integral_against_trace_density():
    F = ClassFunction.bump_angle(2.0)
    ref = haar_by_trace(lambda psi: bump(psi, 2.0))
    assert weyl_integrate(F).real == pytest.approx(ref, abs=1e-12)


def test_character_gram_matrix():
    gram = np.array([[char_inner(n, m) for m in range(6)] for n in range(6)])
    assert np.max(np.abs(gram - np.eye(6))) <= 1e-12


def test_character_coefficients():
    F = ClassFunction.char(2)
    assert group_transform(F, 2) == pytest.approx(1.0, abs=1e-13)
    assert abs(group_transform(F, 3)) <= 1e-13


def test_group_table_and_series(tmp_path):
    F = ClassFunction.bump_angle(1.5)
    table = group_table(F, 240)
    assert isinstance(table, GroupCoefficientTable)
    assert list(table.ns[:3]) == [0, 1, 2]
    path = tmp_path / "g.csv"
    table.to_csv(path)
    assert path.read_text().splitlines()[0] == "n,re,im,quad_err"
    th = np.linspace(0, 2 * math.pi, 201)
    assert np.max(np.abs(group_synthesize(table, th) - F(th))) <= 5e-5


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
def test_extension_antisymmetry(n):
    phi = group_extension(ClassFunction.bump_angle(1.0))
    a, b = phi(n), phi(-n - 2)
    assert abs(a + b) <= 1e-10 * (1 + abs(a))


def test_group_ray_type_in_angle_units():
    for r in (0.5, 1.0, 2.0):
        fit = fit_exponential_type(group_ray(ClassFunction.bump_angle(r)))
        assert fit.r_hat == pytest.approx(r, rel=0.1)


def test_group_membership_examples():
    report = group_pw_check(group_extension(ClassFunction.bump_angle(1.0)), 1.0)
    assert report.verdict_for_r and report.symmetry_residual <= 1e-10
    assert report.symmetry == "weyl-odd"
    dim = group_pw_check(lambda n: n + 1, 1.0)
    assert dim.symmetry_residual <= 1e-15 and not dim.verdict_for_r
    const = group_pw_check(lambda n: 1.0, 1.0)
    assert not const.verdict_for_r and const.symmetry_residual == pytest.approx(1.0)


def test_conjugacy_angle_from_eigenvalues():
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        g = np.array([[q[0] + 1j * q[1], q[2] + 1j * q[3]], [-q[2] + 1j * q[3], q[0] - 1j * q[1]]])
        phases = np.angle(np.linalg.eigvals(g))
        assert conjugacy_angle(g) == pytest.approx(2 * np.max(np.abs(phases)), abs=1e-7)


@pytest.mark.parametrize("n,l", [(0, 0), (2, 1), (4, 2), (6, 3)])
def test_even_characters_average_to_legendre_polynomials(n, l):
    t = np.linspace(0, math.pi, 257)
    got = k_average(ClassFunction.char(n), t)
    assert np.max(np.abs(got - legendre_recurrence(l, np.cos(t)))) <= 1e-10


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_characters_average_to_zero(n):
    t = np.linspace(0, math.pi, 257)
    assert np.max(np.abs(k_average(ClassFunction.char(n), t))) <= 1e-12


def test_average_against_direct_trace_quadrature():
    F = ClassFunction.bump_angle(1.2)
    for t in (0.0, 0.4, 0.9, 1.15):
        ref = quad(lambda th: bump(su2_trace_angle(th, t), 1.2), 0, 2 * math.pi,
                   epsabs=1e-14, limit=400)[0] / (2 * math.pi)
        assert k_average(F, [t])[0] == pytest.approx(ref, abs=1e-11)


def test_left_and_right_averages_agree():
    F = ClassFunction.bump_angle(1.0)
    t = np.linspace(0, math.pi, 129)
    assert np.max(np.abs(k_average(F, t, side="left") - k_average(F, t, side="right"))) <= 1e-14


def test_restricted_range_is_only_an_accuracy_device():
    F = ClassFunction.bump_angle(0.8)
    t = np.linspace(0, math.pi, 33)
    full = k_average(F, t, restrict=False, rtol=1e-10)
    assert np.max(np.abs(full - k_average(F, t))) <= 1e-10


def test_averaging_intertwines_the_transforms():
    for F in (ClassFunction.bump_angle(0.7), ClassFunction.char(6)):
        assert averaging_identity(F, 10)["residual"] <= 1e-9


def test_support_never_grows():
    for r in (0.3, 0.5, 1.0, 2.0):
        check = support_transfer_check(ClassFunction.bump_angle(r), n_grid=1024)
        assert check["ok"] and check["measured_support"] <= r + check["spacing"]
    check = support_transfer_check(ClassFunction.constant(1.0))
    assert check["skipped"] and check["measured_support"] == pytest.approx(math.pi)
