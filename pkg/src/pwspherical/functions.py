"""K-invariant test functions on the radial interval and class functions on SU(2).

A :class:`RadialFunction` is an even function of the geodesic angle
``t in [0, pi]``; a :class:`ClassFunction` is an even function of the
conjugacy angle ``theta in [0, 2 pi]`` of an element of SU(2).  Both are
callables over numpy arrays and carry a ``support_hint``: the radius outside
of which they vanish identically, or ``None`` when no such radius is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import make_interp_spline

RADIAL_FORMS = ("bump", "cospow", "poly-spherical", "constant", "samples", "callable")
CLASS_FORMS = ("char", "bump_angle", "constant", "samples", "callable")


def bump_profile(x, p=1.0):
    """``exp(p - p / (1 - x**2))`` on ``|x| < 1`` and zero outside; equals 1 at 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(p - p / (1.0 - xi * xi))
    return out


def _even_spline(grid, values, period_end):
    """Quintic interpolant of samples reflected evenly about both ends of the grid."""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values)
    if grid.ndim != 1 or grid.size < 8:
        raise ValueError("samples need a 1-d grid with at least 8 points")
    steps = np.diff(grid)
    if abs(grid[0]) > 1e-12 or abs(grid[-1] - period_end) > 1e-9 or np.ptp(steps) > 1e-9 * steps[0]:
        raise ValueError(f"samples must sit on a uniform grid covering [0, {period_end:g}]")
    xs = np.concatenate([-grid[:0:-1], grid, 2 * period_end - grid[-2::-1]])
    ys = np.concatenate([values[:0:-1], values, values[-2::-1]])
    return make_interp_spline(xs, ys, k=5)


def _last_nonzero(grid, values):
    nz = np.flatnonzero(np.abs(values) > 0)
    if nz.size == 0:
        return 0.0
    h = grid[1] - grid[0]
    return float(min(grid[-1], grid[nz[-1]] + 4 * h))


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """An even function of the geodesic angle, by closed form or by samples."""

    form: str
    params: dict = field(default_factory=dict)
    support_hint: float | None = None
    label: str = ""
    _fn: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.form not in RADIAL_FORMS:
            raise ValueError(f"unknown radial form {self.form!r}")

    # constructors ---------------------------------------------------------

    @classmethod
    def bump(cls, r, p=1.0):
        if not 0 < r < math.pi:
            raise ValueError(f"bump radius must satisfy 0 < r < pi, got {r}")
        if p <= 0:
            raise ValueError("bump sharpness must be positive")
        return cls("bump", {"r": float(r), "p": float(p)}, float(r), f"bump(r={r:g},p={p:g})")

    @classmethod
    def cospow(cls, r, q):
        """``cos(pi t / 2r)**q`` on ``[0, r]``; exactly ``q - 1`` times differentiable at ``t = r``."""
        if not 0 < r < math.pi:
            raise ValueError(f"cospow radius must satisfy 0 < r < pi, got {r}")
        if int(q) != q or q < 1:
            raise ValueError("cospow power must be a positive integer")
        return cls("cospow", {"r": float(r), "q": int(q)}, float(r), f"cospow(r={r:g},q={int(q)})")

    @classmethod
    def poly_spherical(cls, space, l):
        """The spherical function of integer degree ``l`` itself (full support)."""
        if int(l) != l or (l < 0 and not space.two_sided):
            raise ValueError("poly-spherical degree must be a lattice point")
        return cls("poly-spherical", {"l": int(l), "space": space}, math.pi, f"sph(l={int(l)})")

    @classmethod
    def constant(cls, c=1.0):
        c = complex(c) if isinstance(c, complex) else float(c)
        return cls("constant", {"c": c}, 0.0 if c == 0 else math.pi, f"constant({c})")

    @classmethod
    def samples(cls, grid, values, support_hint=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values)
        if np.iscomplexobj(values) and np.all(values.imag == 0):
            values = values.real
        spline = _even_spline(grid, values, math.pi)
        if support_hint is None:
            support_hint = _last_nonzero(grid, values)
        return cls("samples", {"grid": grid, "values": values}, float(support_hint),
                   "samples", _fn=spline)

    @classmethod
    def from_callable(cls, fn, support_hint=None, label="callable"):
        return cls("callable", {}, support_hint, label, _fn=fn)

    # evaluation -----------------------------------------------------------

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        form, p = self.form, self.params
        if form == "bump":
            return bump_profile(t / p["r"], p["p"])
        if form == "cospow":
            out = np.zeros_like(t)
            inside = t < p["r"]
            out[inside] = np.cos(np.pi * t[inside] / (2 * p["r"])) ** p["q"]
            return out
        if form == "poly-spherical":
            from .special import spherical_eval

            return spherical_eval(p["space"], p["l"], t).real
        if form == "constant":
            return np.full(t.shape, p["c"])
        if form == "samples":
            inside = t <= self.support_hint
            out = np.zeros(t.shape, dtype=p["values"].dtype)
            out[inside] = self._fn(t[inside])
            return out
        return np.asarray(self._fn(t))

    @property
    def support(self) -> float:
        """Radius of the integration interval used by the transforms."""
        return math.pi if self.support_hint is None else float(self.support_hint)

    @property
    def breakpoints(self):
        """Interior knots where the closed form is not smooth (cell edges for samples)."""
        if self.form == "samples":
            grid = self.params["grid"]
            return grid[grid <= self.support + 1e-12]
        return None


def _reduce_conjugacy_angle(theta):
    """Map an arbitrary torus angle to the conjugacy parameter in ``[0, 2 pi]``."""
    th = np.mod(np.asarray(theta, dtype=float), 4 * math.pi)
    return np.where(th > 2 * math.pi, 4 * math.pi - th, th)


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """A conjugation-invariant function on SU(2) as a function of the conjugacy angle.

    The element ``diag(exp(i theta/2), exp(-i theta/2))`` has conjugacy angle
    ``theta``; ``theta = 0`` is the identity and ``theta = 2 pi`` is ``-I``.
    """

    form: str
    params: dict = field(default_factory=dict)
    support_hint: float | None = None
    label: str = ""
    _fn: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.form not in CLASS_FORMS:
            raise ValueError(f"unknown class-function form {self.form!r}")

    @classmethod
    def char(cls, n):
        if int(n) != n or n < 0:
            raise ValueError("character label must be a non-negative integer")
        return cls("char", {"n": int(n)}, None, f"char(n={int(n)})")

    @classmethod
    def bump_angle(cls, r, p=1.0):
        if not 0 < r < math.pi:
            raise ValueError(f"bump radius must satisfy 0 < r < pi, got {r}")
        return cls("bump_angle", {"r": float(r), "p": float(p)}, float(r), f"bump(r={r:g},p={p:g})")

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", {"c": c}, None, f"constant({c})")

    @classmethod
    def samples(cls, grid, values, support_hint=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values)
        spline = _even_spline(grid, values, 2 * math.pi)
        if support_hint is None:
            hint = _last_nonzero(grid, values)
            support_hint = None if hint >= grid[-1] else hint
        return cls("samples", {"grid": grid, "values": values}, support_hint, "samples", _fn=spline)

    @classmethod
    def from_callable(cls, fn, support_hint=None, label="callable"):
        return cls("callable", {}, support_hint, label, _fn=fn)

    def __call__(self, theta):
        th = _reduce_conjugacy_angle(theta)
        form, p = self.form, self.params
        if form == "char":
            from .special import character_eval

            return character_eval(p["n"], th).real
        if form == "bump_angle":
            return bump_profile(th / p["r"], p["p"])
        if form == "constant":
            return np.full(th.shape, p["c"])
        if form == "samples":
            out = self._fn(th)
            if self.support_hint is not None:
                out = np.where(th <= self.support_hint, out, 0.0)
            return out
        return np.asarray(self._fn(th))

    @property
    def support(self) -> float:
        return 2 * math.pi if self.support_hint is None else float(self.support_hint)
