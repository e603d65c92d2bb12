"""Spherical Fourier transform, Fourier series synthesis and the checks built on them.

The transform of a radial function ``f`` at a (complex) degree ``lam`` is

    f~(lam) = int_0^pi f(t) psi_lam(t) w(t) dt,

evaluated by Gauss-Legendre quadrature over the support of ``f``.  At lattice
degrees ``psi_l`` is real, so no conjugate is applied anywhere and the same
formula is the holomorphic extension in ``lam``.  The Fourier series is

    f(t) = sum_l d_l f~(l) psi_l(t),

with ``d_l = 1 / int psi_l**2 w`` (Schur orthogonality).  On the torus the
series is the two-sided exponential series with unit weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .functions import RadialFunction
from .geometry import SpaceDescriptor, expected_dimension, spherical_lattice
from .quadrature import integrate_doubling
from .serialize import csv_text, read_csv, write_csv
from .special import laplacian_samples, spherical_eval, weight_density

FORWARD_RTOL = 1e-12


def node_count(lam) -> int:
    """Initial rule size ``>= 8 max(|lam|, 1) + 64``, rounded up to a power of two.

    The ladder keeps the number of distinct (cached) rules small.
    """
    n = int(math.ceil(8 * max(abs(complex(lam)), 1.0))) + 64
    return 1 << (n - 1).bit_length()


def forward_with_error(space: SpaceDescriptor, f: RadialFunction, lam, *, rtol=FORWARD_RTOL):
    """Like :func:`forward` but returns ``(value, error_estimate, nodes_used)``."""
    lam = complex(lam)

    def integrand(t):
        return f(t) * spherical_eval(space, lam, t) * weight_density(space, t)

    support = min(f.support, math.pi)
    knots = f.breakpoints
    if knots is not None:
        return integrate_doubling(integrand, 0.0, support, 8, rtol=rtol, edges=knots)
    return integrate_doubling(integrand, 0.0, support, node_count(lam), rtol=rtol)


def forward(space: SpaceDescriptor, f: RadialFunction, lam, *, rtol=FORWARD_RTOL) -> complex:
    """Spherical transform of ``f`` at degree ``lam`` (any complex number).

    >>> from pwspherical.geometry import catalog_space
    >>> round(forward(catalog_space("s2"), RadialFunction.constant(1.0), 0).real, 12)
    1.0
    """
    return forward_with_error(space, f, lam, rtol=rtol)[0]


@dataclass
class CoefficientTable:
    """Spectral data ``l -> f~(l)`` on the lattice, with quadrature diagnostics."""

    space: SpaceDescriptor
    ls: np.ndarray
    values: np.ndarray
    quad_err: np.ndarray
    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    label: str = ""
    support_hint: float | None = None
    index_name: str = "l"

    def __post_init__(self):
        self.ls = np.asarray(self.ls, dtype=int)
        self.values = np.asarray(self.values, dtype=complex)
        self.quad_err = np.asarray(self.quad_err, dtype=float)

    @property
    def l_max(self) -> int:
        return int(np.max(np.abs(self.ls))) if self.ls.size else 0

    def entry(self, l) -> complex:
        idx = np.flatnonzero(self.ls == l)
        if idx.size == 0:
            raise KeyError(l)
        return complex(self.values[idx[0]])

    def as_dict(self) -> dict:
        return {int(l): complex(v) for l, v in zip(self.ls, self.values)}

    def truncated(self, l_max) -> "CoefficientTable":
        keep = np.abs(self.ls) <= l_max
        return CoefficientTable(self.space, self.ls[keep], self.values[keep], self.quad_err[keep],
                                self.nodes[keep] if self.nodes.size else self.nodes,
                                self.label, self.support_hint, self.index_name)

    def rows(self):
        return [(int(l), v.real, v.imag, e) for l, v, e in zip(self.ls, self.values, self.quad_err)]

    def csv(self) -> str:
        return csv_text([self.index_name, "re", "im", "quad_err"], self.rows())

    def to_csv(self, path) -> None:
        write_csv(path, [self.index_name, "re", "im", "quad_err"], self.rows())

    @classmethod
    def from_csv(cls, path, space: SpaceDescriptor) -> "CoefficientTable":
        header, rows = read_csv(path)
        if header[1:] != ["re", "im", "quad_err"]:
            raise ValueError(f"unexpected coefficient header {header}")
        arr = np.array(rows, dtype=float).reshape(-1, 4)
        return cls(space, arr[:, 0].astype(int), arr[:, 1] + 1j * arr[:, 2], arr[:, 3],
                   index_name=header[0])


def coefficient_table(space: SpaceDescriptor, f: RadialFunction, l_max, *, rtol=FORWARD_RTOL):
    ls = spherical_lattice(space, l_max)
    vals, errs, nodes = [], [], []
    for l in ls:
        v, e, n = forward_with_error(space, f, int(l), rtol=rtol)
        vals.append(v)
        errs.append(e)
        nodes.append(n)
    return CoefficientTable(space, ls, vals, errs, np.asarray(nodes), f.label, f.support_hint)


@lru_cache(maxsize=4096)
def dimension(space: SpaceDescriptor, l: int) -> float:
    """Representation dimension ``d_l`` as the reciprocal squared norm of ``psi_l``.

    ``psi_l**2`` is a polynomial of degree ``2l`` in ``x = cos t`` and the
    probability weight becomes ``(1-x)**a (1+x)**b`` up to a constant, so an
    ``(l+1)``-point Gauss-Jacobi rule (normalised to unit mass) is exact.

    On the torus the lattice is two-sided and the basis is ``exp(i n t)``,
    whose norm is 1 for every ``n``.
    """
    if space.two_sided:
        return 1.0
    if l < 0 or int(l) != l:
        raise ValueError("dimension is defined on the non-negative integer lattice")
    l = int(l)
    x, w = roots_jacobi(l + 2, space.jacobi_a, space.jacobi_b)
    p = spherical_eval(space, l, np.arccos(np.clip(x, -1.0, 1.0))).real
    return float(np.sum(w) / np.dot(w, p * p))


def verify_catalog_entry(space: SpaceDescriptor, l_max=4, rtol=1e-8) -> bool:
    """True when quadrature dimensions match the closed-form dimensions up to ``l_max``."""
    for l in range(l_max + 1):
        d = dimension(space, l)
        ref = expected_dimension(space, l)
        if abs(d - ref) > rtol * ref:
            return False
    return True


def _basis(space, l, t):
    if space.two_sided:
        return np.exp(1j * l * np.asarray(t, dtype=float))
    return spherical_eval(space, int(l), t)


def synthesize(space: SpaceDescriptor, table: CoefficientTable, t_grid) -> np.ndarray:
    """Partial Fourier series ``sum_l d_l f~(l) psi_l(t)`` over the table entries."""
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    total = np.zeros(t.shape, dtype=complex)
    for l, v in zip(table.ls, table.values):
        if v == 0:
            continue
        total += dimension(space, int(l)) * v * _basis(space, l, t)
    if np.max(np.abs(total.imag), initial=0.0) <= 1e-13 * max(np.max(np.abs(total), initial=0.0), 1e-300):
        return total.real
    return total


def series_function(space: SpaceDescriptor, table: CoefficientTable) -> RadialFunction:
    """The partial Fourier series as a lazily evaluated RadialFunction (full support)."""
    return RadialFunction.from_callable(lambda t: synthesize(space, table, t), math.pi,
                                        label=f"series(l_max={table.l_max})")


def truncation_tail(space: SpaceDescriptor, table: CoefficientTable) -> float:
    """Sup-norm bound of the top quarter of the series; ``|psi_l| <= 1`` on the lattice."""
    top = np.abs(table.ls) > 0.75 * table.l_max
    return float(sum(dimension(space, int(l)) * abs(v) for l, v in zip(table.ls[top], table.values[top])))


def synthesize_adaptive(space, f, t_grid, *, tol=1e-6, l_max_cap=200, l_start=25):
    """Synthesize with ``l_max`` doubled (up to the cap) until the tail bound is below ``tol``.

    Returns ``(values, table, tail)``.
    """
    l_max = min(l_start, l_max_cap)
    while True:
        table = coefficient_table(space, f, l_max)
        tail = truncation_tail(space, table)
        if tail <= tol or l_max >= l_max_cap:
            return synthesize(space, table, t_grid), table, tail
        l_max = min(2 * l_max, l_max_cap)


def laplacian_eigenvalue(space: SpaceDescriptor, l) -> float:
    """Eigenvalue of the radial Laplacian on ``psi_l``: ``-((l + rho)**2 - rho**2)``."""
    rho = space.rho_c
    return -((l + rho) ** 2 - rho**2)


def eigen_check(space: SpaceDescriptor, f: RadialFunction, l_max, *, n_grid=4097) -> float:
    """Largest normalised residual of ``(Lf)~(l) = -((l+rho)^2 - rho^2) f~(l)`` over the lattice.

    ``Lf`` is formed by fourth-order finite differences on ``n_grid`` uniform
    points and transformed through its quintic interpolant; ``f~`` uses the
    closed form of ``f``.
    """
    grid = np.linspace(0.0, math.pi, int(n_grid))
    lf_vals = laplacian_samples(space, grid, np.asarray(f(grid)))
    h = grid[1] - grid[0]
    support = min(math.pi, f.support + 3 * h)
    lf = RadialFunction.samples(grid, lf_vals, support_hint=support)
    worst = 0.0
    for l in spherical_lattice(space, l_max):
        if l < 0:
            continue
        ft = forward(space, f, int(l))
        lft = forward(space, lf, int(l))
        res = abs(lft - laplacian_eigenvalue(space, l) * ft) / (1 + abs(ft) * (l + 1) ** 2)
        worst = max(worst, res)
    return worst


def l2_norm_squared(space: SpaceDescriptor, f: RadialFunction) -> float:
    def integrand(t):
        v = f(t)
        return np.abs(v) ** 2 * weight_density(space, t)

    return integrate_doubling(integrand, 0.0, min(f.support, math.pi), 128, rtol=1e-14)[0].real


def parseval_check(space: SpaceDescriptor, f: RadialFunction, l_max=None, *, l_cap=512, stable=1e-10):
    """Relative Parseval defect ``|sum d_l |f~(l)|^2 - ||f||^2| / ||f||^2``.

    With ``l_max=None`` the degree is doubled from 16 until the newly added
    block changes the spectral sum by less than ``stable`` relative to the norm.
    """
    norm = l2_norm_squared(space, f)
    if norm == 0:
        return 0.0

    def spectral(table):
        return sum(dimension(space, int(l)) * abs(v) ** 2 for l, v in zip(table.ls, table.values))

    if l_max is not None:
        return abs(spectral(coefficient_table(space, f, l_max)) - norm) / norm
    L = 16
    previous = spectral(coefficient_table(space, f, L))
    while L < l_cap:
        L = min(2 * L, l_cap)
        current = spectral(coefficient_table(space, f, L))
        if abs(current - previous) <= stable * norm:
            return abs(current - norm) / norm
        previous = current
    return abs(previous - norm) / norm


@dataclass(frozen=True)
class DecayProfile:
    constants: dict
    tail_exponent: float
    tail_window: tuple
    passes: dict

    def to_dict(self):
        return {"constants": self.constants, "tail_exponent": self.tail_exponent,
                "tail_window": list(self.tail_window), "passes": self.passes}


def _envelope(table: CoefficientTable, l_min=1):
    """Block maxima of ``|f~(l)|``; blocks span about one oscillation period ``2 pi / support``."""
    keep = table.ls >= l_min
    ls = table.ls[keep]
    mags = np.abs(table.values[keep])
    support = table.support_hint if table.support_hint else math.pi
    block = max(2, int(math.ceil(2 * math.pi / support)) + 1)
    pts_l, pts_m = [], []
    for start in range(0, ls.size - block + 1, block):
        seg = mags[start:start + block]
        i = int(np.argmax(seg))
        if seg[i] > 0:
            pts_l.append(ls[start + i])
            pts_m.append(seg[i])
    return np.asarray(pts_l, dtype=float), np.asarray(pts_m)


def algebraic_decay_exponent(table: CoefficientTable, l_min=None, l_hi=None) -> float:
    """Least-squares exponent ``k`` of ``|f~(l)| ~ (1+l)^-k`` fitted to the envelope."""
    ls, ms = _envelope(table)
    lo = l_min if l_min is not None else 0
    hi = l_hi if l_hi is not None else np.inf
    sel = (ls >= lo) & (ls <= hi)
    if sel.sum() < 3:
        raise ValueError("too few envelope points in the fit window")
    slope = np.polyfit(np.log1p(ls[sel]), np.log(ms[sel]), 1)[0]
    return float(-slope)


def decay_profile(table: CoefficientTable, ks=range(9)) -> DecayProfile:
    """Decay constants ``C_k = max_l |f~(l)| (1+l)^k`` and whether each bound extends past the table.

    A bound ``|f~(l)| <= C_k (1+l)^-k`` fitted on a finite table extends to
    all larger ``l`` once the local decay exponent at the end of the table
    exceeds ``k``; that exponent is fitted on the last third of the lattice.
    """
    nonneg = table.ls >= 0
    ls = table.ls[nonneg].astype(float)
    mags = np.abs(table.values[nonneg])
    constants = {int(k): float(np.max(mags * (1 + ls) ** k)) for k in ks}
    L = table.l_max
    window = (2 * L / 3, float(L))
    tail = algebraic_decay_exponent(table, *window)
    passes = {int(k): bool(np.isfinite(constants[int(k)]) and tail > k) for k in ks}
    return DecayProfile(constants, tail, window, passes)
