import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwspherical.errors import DegenerateInputError, RangeError, ResolutionError
from pwspherical.functions import RadialFunction
from pwspherical.geometry import catalog_space
from pwspherical.holo import (
    RaySamples,
    carlson_sharpness,
    default_sigmas,
    extend_on_ray,
    extension_accessor,
    fit_exponential_type,
    pw_membership,
    support_radius,
    surjectivity_probe,
)
from pwspherical.transform import coefficient_table, forward

from oracles import bump, quad_transform

S2 = catalog_space("s2")
TORUS = catalog_space("torus")
SIGMAS = default_sigmas(120.0, 40)


def analytic_ray(fn, sigmas=SIGMAS, center=-0.5):
    return RaySamples(S2, center, 1.0, sigmas, np.array([fn(center + 1j * s) for s in sigmas]))


def test_ray_through_the_symmetry_center():
    ray = extend_on_ray(S2, RadialFunction.bump(1.0), 1.0, [0.0, 10.0])
    assert ray.center == -0.5
    assert ray.values[0] == pytest.approx(forward(S2, RadialFunction.bump(1.0), -0.5))
    ref = quad_transform(lambda t: bump(t, 1.0), 0.0, 0.0, -0.5 + 10j, 1.0)
    assert ray.values[1].real > 0
    assert abs(ray.values[1].imag) <= 1e-12 * abs(ray.values[1])
    assert ray.values[1] == pytest.approx(ref, rel=1e-10)


def test_overflow_guard_truncates_the_ray():
    ray = extend_on_ray(S2, RadialFunction.bump(2.5), 1.0, [100.0, 200.0, 300.0, 400.0])
    assert ray.truncated and list(ray.sigmas) == [100.0, 200.0]
    assert "overflow" in ray.note


def test_extension_agrees_with_lattice_data():
    f = RadialFunction.bump(1.0)
    table = coefficient_table(S2, f, 12)
    g = extension_accessor(S2, f)
    for l in range(13):
        assert g(l) == table.entry(l)


def test_ray_samples_validation_and_csv(tmp_path):
    with pytest.raises(ValueError):
        RaySamples(S2, -0.5, 1.0, [2.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        RaySamples(S2, -0.5, 1.0, [1.0, 2.0], [1.0, np.inf])
    ray = extend_on_ray(S2, RadialFunction.bump(0.5), 1.0, [1.0, 2.0, 3.0])
    path = tmp_path / "ray.csv"
    ray.to_csv(path)
    assert path.read_text().startswith("sigma,re,im\n")
    back = RaySamples.from_csv(path, S2, -0.5)
    assert np.array_equal(back.values, ray.values) and np.array_equal(back.sigmas, ray.sigmas)
    assert np.allclose(ray.points(), -0.5 + 1j * np.array([1.0, 2.0, 3.0]))


def test_type_of_cosine_is_pi():
    fit = fit_exponential_type(analytic_ray(lambda z: np.cos(np.pi * (z + 0.5))))
    assert fit.r_hat == pytest.approx(math.pi, rel=1e-6)
    assert fit.window == (60.0, 120.0)


def test_polynomial_growth_has_type_zero():
    fit = fit_exponential_type(analytic_ray(lambda z: (z + 0.5) ** 2 + 1))
    assert fit.r_hat <= 0.05


@settings(max_examples=20, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(-math.pi, math.pi))
def test_fit_is_scale_invariant(c, phase):
    ray = extend_on_ray(TORUS, RadialFunction.bump(1.0), 1.0, SIGMAS)
    scaled = RaySamples(TORUS, ray.center, 1.0, ray.sigmas, c * np.exp(1j * phase) * ray.values)
    assert fit_exponential_type(scaled).r_hat == pytest.approx(fit_exponential_type(ray).r_hat, abs=1e-6)


def test_sign_changes_switch_on_the_envelope():
    ray = analytic_ray(lambda z: np.exp(-2j * (z + 0.5)) * np.cos(z.imag))
    fit = fit_exponential_type(ray)
    assert fit.envelope_used and fit.method == "plain"
    assert fit.r_hat == pytest.approx(2.0, rel=0.02)
    ray = analytic_ray(lambda z: np.cosh(2 * z.imag) * np.sin(0.7 * z.imag))
    assert fit_exponential_type(ray).r_hat == pytest.approx(2.0, rel=0.02)


def test_zero_samples():
    ray = analytic_ray(lambda z: 0.0)
    with pytest.raises(DegenerateInputError):
        fit_exponential_type(ray)
    fit = fit_exponential_type(ray, allow_zero=True)
    assert fit.r_hat == 0.0 and fit.zero_function
    rep = support_radius(S2, RadialFunction.constant(0.0))
    assert rep.r_hat == 0.0 and rep.zero_function


def test_fit_needs_enough_data():
    with pytest.raises(ResolutionError):
        fit_exponential_type(analytic_ray(np.cosh, default_sigmas(120.0, 10)))
    with pytest.raises(ResolutionError):
        fit_exponential_type(analytic_ray(np.cosh, default_sigmas(50.0, 40)))


def test_plain_slope_is_kept_as_a_diagnostic():
    ray = extend_on_ray(S2, RadialFunction.bump(1.0), 1.0, SIGMAS)
    corrected = fit_exponential_type(ray)
    plain = fit_exponential_type(ray, method="plain")
    assert plain.r_hat == pytest.approx(corrected.slope_plain)
    assert plain.r_hat < corrected.r_hat
    with pytest.raises(ValueError):
        fit_exponential_type(ray, method="unknown")


@settings(max_examples=8, deadline=None)
@given(st.floats(0.3, 2.6), st.sampled_from([0.5, 1.0, 2.0]))
def test_torus_type_recovery_over_the_bump_family(r, p):
    fit = support_radius(TORUS, RadialFunction.bump(r, p))
    assert abs(fit.r_hat - r) <= 0.05 * r


def test_support_radius_near_the_injectivity_radius():
    assert support_radius(S2, RadialFunction.bump(2.5)).r_hat == pytest.approx(2.5, rel=0.1)
    assert support_radius(catalog_space("s3"), RadialFunction.bump(1.0)).r_hat == pytest.approx(1.0, rel=0.1)


def test_membership_accepts_a_bump():
    report = pw_membership(S2, extension_accessor(S2, RadialFunction.bump(1.0)), 1.0)
    assert report.verdict_for_r
    assert report.symmetry_residual <= 1e-10
    assert report.coverage == 1.0 and report.decay_ok
    assert set(report.decay_constants) == set(range(9))
    data = report.to_dict()
    assert data["tolerance_rel"] == 0.10 and data["tolerance_abs"] == 0.02


def test_membership_rejects_asymmetric_data():
    report = pw_membership(S2, lambda z: z, 1.0)
    assert not report.verdict_for_r
    # the residual is driven by |2 lam + 2 rho| / (1 + |lam|)
    assert report.symmetry_residual > 1.0


def test_membership_rejects_an_undersized_radius():
    report = pw_membership(S2, extension_accessor(S2, RadialFunction.bump(0.5)), 0.25)
    assert not report.verdict_for_r
    assert report.type_fit.r_hat == pytest.approx(0.5, rel=0.1)


def test_membership_tracks_coverage():
    def g(z):
        if abs(z) > 15:
            raise RangeError("outside the trusted region")
        return np.cos(np.pi * (z + 0.5))

    report = pw_membership(S2, g, 4.0, sigma_max=120.0)
    assert 0 < report.coverage < 1
    assert report.failures and report.failures[0]["type"] == "RangeError"
    assert not report.verdict_for_r


def test_carlson_report():
    rep = carlson_sharpness()
    assert rep["lattice_max_abs"] <= 1e-9
    assert rep["symmetry_residual"] <= 1e-12
    assert rep["type_within_2pct"]
    assert "r < pi" in rep["conclusion"]


def test_synthesis_probe_recovers_support_and_data():
    rep = surjectivity_probe(S2, RadialFunction.bump(1.0), l_max=120, n_grid=2049)
    assert rep["support_ok"]
    assert rep["lattice_ok"]
