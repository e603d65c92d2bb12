"""Class functions on SU(2), their character expansions, and K-averaging onto the 2-sphere.

Angles: a class function is a function of the conjugacy angle ``theta`` in
``[0, 2 pi]`` (``diag(e^{i theta/2}, e^{-i theta/2})``); a radial function on
``S^2 = SU(2)/U(1)`` is a function of the geodesic angle ``t``, realised by
``a_t = exp(t/2 * i sigma_x)``.  Both angles are measured with the same
normalisation, so support radii compare directly.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .functions import ClassFunction, RadialFunction
from .geometry import catalog_space
from .holo import (
    PWReport,
    RaySamples,
    _pw_report,
    default_sigmas,
    fit_exponential_type,
    measured_support,
    symmetry_grid,
)
from .quadrature import integrate_doubling, integrate_rows
from .special import OVERFLOW_EXPONENT, character_eval
from .errors import RangeError
from .transform import CoefficientTable, dimension, forward, node_count

GROUP_RTOL = 1e-12
_SU2 = catalog_space("su2-group")
_S2 = catalog_space("s2")


def _as_class_function(F) -> ClassFunction:
    if isinstance(F, ClassFunction):
        return F
    if callable(F):
        return ClassFunction.from_callable(F)
    return ClassFunction.constant(F)


def _edges(F: ClassFunction):
    if F.form == "samples":
        grid = F.params["grid"]
        return grid[grid <= F.support + 1e-12]
    return None


def weyl_integrate(F, *, n0=128, rtol=GROUP_RTOL) -> complex:
    """Haar integral of a class function, ``(1/2pi) int_0^{2pi} F(theta) 2 sin^2(theta/2) dtheta``.

    >>> round(weyl_integrate(lambda th: np.ones_like(th)).real, 14)
    1.0
    """
    F = _as_class_function(F)

    def integrand(th):
        return np.asarray(F(th)) * np.sin(th / 2) ** 2 / math.pi

    edges = _edges(F)
    if edges is not None:
        return integrate_doubling(integrand, 0.0, F.support, 8, rtol=rtol, edges=edges)[0]
    return integrate_doubling(integrand, 0.0, min(F.support, 2 * math.pi), n0, rtol=rtol)[0]


def char_inner(n, m, **kw) -> complex:
    """``<chi_n, chi_m>`` in L^2 of the normalised Haar measure (characters are real)."""
    return weyl_integrate(lambda th: character_eval(n, th) * character_eval(m, th), **kw)


def group_transform_with_error(F, n, *, rtol=GROUP_RTOL):
    """``(F^(n), error, nodes)`` with ``F^(n) = <F, chi_n>`` for any complex ``n``.

    ``chi_n(theta) 2 sin^2(theta/2)`` is evaluated as ``2 sin((n+1)theta/2) sin(theta/2)``,
    which is regular at ``theta = 2 pi`` also for non-integer ``n``.
    """
    F = _as_class_function(F)
    n = complex(n)
    top = min(F.support, 2 * math.pi)
    if abs(n.imag) * top / 2 > OVERFLOW_EXPONENT:
        raise RangeError(f"|Im n| * theta / 2 = {abs(n.imag) * top / 2:.1f} exceeds the overflow guard")

    def integrand(th):
        return np.asarray(F(th)) * np.sin((n + 1) * th / 2) * np.sin(th / 2) / math.pi

    edges = _edges(F)
    if edges is not None:
        return integrate_doubling(integrand, 0.0, F.support, 8, rtol=rtol, edges=edges)
    return integrate_doubling(integrand, 0.0, top, node_count(n), rtol=rtol)


def group_transform(F, n, *, rtol=GROUP_RTOL) -> complex:
    return group_transform_with_error(F, n, rtol=rtol)[0]


class GroupCoefficientTable(CoefficientTable):
    """Character coefficients ``n -> F^(n)`` for ``n = 0, 1, 2, ...``."""

    def __init__(self, ns, values, quad_err, nodes=None, label="", support_hint=None):
        super().__init__(_SU2, ns, values, quad_err,
                         np.zeros(0, dtype=int) if nodes is None else np.asarray(nodes),
                         label, support_hint, "n")

    @property
    def ns(self):
        return self.ls


def group_table(F, n_max, *, rtol=GROUP_RTOL) -> GroupCoefficientTable:
    F = _as_class_function(F)
    ns = np.arange(0, int(n_max) + 1)
    out = [group_transform_with_error(F, int(n), rtol=rtol) for n in ns]
    return GroupCoefficientTable(ns, [o[0] for o in out], [o[1] for o in out], [o[2] for o in out],
                                 F.label, F.support_hint)


def group_synthesize(table: CoefficientTable, theta) -> np.ndarray:
    """Character series ``sum_n F^(n) chi_n(theta)`` with unit weights."""
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    total = np.zeros(th.shape, dtype=complex)
    for n, v in zip(table.ls, table.values):
        total += v * character_eval(int(n), th)
    return total


# --- extension and membership ----------------------------------------------


def group_ray(F, sigmas=None) -> RaySamples:
    """Sample ``F^`` at ``n = -1 + 2 i sigma``; the growth rate in ``sigma`` is the angle support."""
    F = _as_class_function(F)
    sigmas = default_sigmas() if sigmas is None else np.asarray(sigmas, dtype=float)
    values = [group_transform(F, -1 + 2j * s) for s in sigmas]
    return RaySamples(_SU2, -1 + 0j, 1 + 0j, sigmas, np.asarray(values), scale=2.0)


def group_extension(F) -> Callable:
    F = _as_class_function(F)
    return lambda n: group_transform(F, n)


def group_pw_check(phi: Callable, r, *, sigma_max=120.0, n_sigma=40, n_max=60, grid=None,
                   symmetry_threshold=1e-8) -> PWReport:
    """Membership check in the group convention: ``Phi(-n-2) = -Phi(n)``, type in angle units."""
    grid = symmetry_grid(re_max=12.0, im_max=24.0) if grid is None else np.asarray(grid, dtype=complex)
    return _pw_report(phi, reflect=lambda n: -n - 2, sign=-1.0, center=-1.0, scale=2.0,
                      lattice=list(range(0, int(n_max) + 1)), r=r, sigma_max=sigma_max,
                      n_sigma=n_sigma, grid=grid, symmetry_name="weyl-odd", space=_SU2,
                      symmetry_threshold=symmetry_threshold)


# --- K-average ---------------------------------------------------------------


def _k(theta):
    e = np.exp(0.5j * theta)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = e
    out[..., 1, 1] = np.conj(e)
    return out


def _a(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    out = np.empty(np.shape(t) + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = 1j * s
    out[..., 1, 0] = 1j * s
    out[..., 1, 1] = c
    return out


def conjugacy_angle(g) -> np.ndarray:
    """Conjugacy angle in ``[0, 2 pi]`` of SU(2) matrices, from ``2 cos(psi/2) = Re tr g``."""
    half_trace = np.real(g[..., 0, 0] + g[..., 1, 1]) / 2
    return 2 * np.arccos(np.clip(half_trace, -1.0, 1.0))


def _theta_limit(F: ClassFunction, t):
    """Largest ``theta`` with ``psi(k_theta a_t) <= support``; beyond it ``F`` vanishes."""
    r = F.support
    if r >= 2 * math.pi:
        return np.full(np.shape(t), 2 * math.pi)
    ratio = math.cos(r / 2) / np.cos(np.asarray(t) / 2)
    inside = ratio < 1.0
    lim = np.zeros(np.shape(t))
    lim[inside] = 2 * np.arccos(ratio[inside])
    return lim


def k_average(F, t_grid, *, side="left", rtol=GROUP_RTOL, n0=64, restrict=True) -> np.ndarray:
    """``f(t) = (1/2pi) int_0^{2pi} F(k_theta a_t) dtheta`` on ``t_grid``.

    ``K`` is the circle ``theta in [0, 4 pi)``.  The trace
    ``2 cos(theta/2) cos(t/2)`` depends on ``theta`` through ``cos(theta/2)``,
    whose distribution over ``[0, 2 pi)`` equals that over the full circle,
    so half the circle suffices.

    The tolerance ``rtol`` is relative to ``max |f|`` over the grid.
    With ``restrict`` (and ``F`` compactly supported) the integral runs over
    the ``theta`` interval where the conjugacy angle stays inside the support
    of ``F``; this is an accuracy device only.  ``side="right"`` averages
    ``F(a_t k_theta)`` instead.
    """
    F = _as_class_function(F)
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    hi = _theta_limit(F, t) if restrict else np.full(t.shape, 2 * math.pi)
    at = _a(t)[:, None]

    def integrand(theta):
        k = _k(theta)
        g = k @ at if side == "left" else at @ k
        return np.asarray(F(conjugacy_angle(g))) / (2 * math.pi)

    vals, _ = integrate_rows(integrand, np.zeros(t.shape), hi, n0, rtol=rtol, shared_scale=True)
    if np.all(np.abs(vals.imag) <= 1e-15 * np.maximum(np.abs(vals), 1.0)):
        return vals.real
    return vals


def k_average_function(F, **kw) -> RadialFunction:
    """Lazily evaluated K-average on ``S^2``, supported where ``F`` is (in the same angle)."""
    F = _as_class_function(F)
    support = min(F.support, math.pi)
    return RadialFunction.from_callable(lambda t: k_average(F, t, **kw), support,
                                        label=f"k_average({F.label})")


def averaging_identity(F, l_max=10) -> dict:
    """Compare ``d(l) f~(l)`` on S^2 with ``F^(2l)`` for ``l <= l_max``.

    ``residual`` is the largest discrepancy relative to ``max_l |F^(2l)|``.
    """
    F = _as_class_function(F)
    f = k_average_function(F)
    lhs, rhs = [], []
    for l in range(int(l_max) + 1):
        lhs.append(dimension(_S2, l) * forward(_S2, f, l))
        rhs.append(group_transform(F, 2 * l))
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = float(np.max(np.abs(rhs)))
    diff = np.abs(lhs - rhs)
    return {
        "l": list(range(int(l_max) + 1)),
        "lhs": lhs,
        "rhs": rhs,
        "abs_residual": diff,
        "residual": float(diff.max() / scale) if scale > 0 else float(diff.max()),
    }


def support_transfer_check(F, *, threshold=1e-12, n_grid=2048) -> dict:
    """Measured support of the K-average of ``F`` against the support of ``F``.

    The measured radius is the last grid point where ``|f| > threshold * max|f|``.
    Class functions without a support radius are flagged and not checked.
    """
    F = _as_class_function(F)
    grid = np.linspace(0.0, math.pi, int(n_grid))
    h = float(grid[1] - grid[0])
    if F.support >= 2 * math.pi:
        return {"measured_support": math.pi, "support_bound": None, "spacing": h,
                "skipped": True, "ok": None}
    vals = k_average(F, grid)
    peak = float(np.max(np.abs(vals)))
    measured = measured_support(grid, vals, threshold * peak) if peak > 0 else 0.0
    bound = F.support + h
    return {"measured_support": measured, "support_bound": bound, "spacing": h,
            "skipped": False, "ok": bool(measured <= bound)}
