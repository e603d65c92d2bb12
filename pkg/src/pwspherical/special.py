"""Spherical functions at complex degree, SU(2) characters, radial density and Laplacian.

For a rank-one space with Jacobi exponents ``(a, b)`` the spherical function of
degree ``lam`` is

    psi_lam(t) = 2F1(-lam, lam + a + b + 1; a + 1; sin(t/2)**2),

an entire function of ``lam`` for fixed ``t < pi``.  Writing ``nu = lam + rho_c``
the numerator factors of the series combine to ``(k + rho_c)**2 - nu**2``, so
the series depends on ``nu**2`` only and the Weyl symmetry
``lam -> -lam - 2 rho_c`` holds term by term.  On the central ray
``nu = i sigma`` every term is positive, hence there is no cancellation there.

Away from that ray large ``|Re nu| * t`` causes cancellation.  The double
precision sum tracks its largest term; when the ratio to the result exceeds
``_CANCELLATION_LIMIT`` the affected points are re-summed in multiprecision.
Lattice degrees bypass the series and use the Jacobi polynomial directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as sps

from .errors import RangeError, ResolutionError, TruncationError
from .geometry import SpaceDescriptor

T_EDGE = math.pi - 1e-6
OVERFLOW_EXPONENT = 700.0
_CANCELLATION_LIMIT = 1e3
MIN_LAPLACIAN_POINTS = 257


def lattice_degree(space: SpaceDescriptor, lam) -> int | None:
    """The integer degree ``l`` if ``lam`` is ``l`` or its Weyl image, else ``None``."""
    lam = complex(lam)
    if lam.imag != 0.0:
        return None
    if space.two_sided:
        return int(lam.real) if lam.real == int(lam.real) else None
    nu = abs(lam.real + space.rho_c)
    l = nu - space.rho_c
    if l >= 0 and l == int(l):
        return int(l)
    return None


def _jacobi_normalized(l, a, b, x):
    """Jacobi polynomial of degree ``l`` scaled to 1 at ``x = 1``."""
    return sps.eval_jacobi(l, a, b, x) / sps.binom(l + a, l)


def _series_double(nu2, rho, a, z, tol, max_terms):
    z = np.asarray(z, dtype=float)
    term = np.ones(z.shape, dtype=complex)
    total = term.copy()
    peak = np.ones(z.shape)
    abs_nu = math.sqrt(abs(nu2))
    anu2 = abs(nu2)
    done = np.zeros(z.shape, dtype=bool)
    k = 0
    while not done.all():
        if k >= max_terms:
            last = float(np.max(np.abs(term[~done])))
            raise TruncationError(
                f"2F1 series not converged after {max_terms} terms (last |term| = {last:.3e})", last
            )
        den = (k + a + 1.0) * (k + 1.0)
        term = term * (((k + rho) ** 2 - nu2) / den) * z
        total += term
        np.maximum(peak, np.abs(term), out=peak)
        k += 1
        if k >= 8 and k > abs_nu:
            # |ratio_j| <= q for j >= k once k exceeds |nu|; geometric tail bound.
            q = z * max(((k + rho) ** 2 + anu2) / ((k + a + 1.0) * (k + 1.0)), 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                tail = np.where(q < 1, np.abs(term) * q / (1 - q), np.inf)
            done |= tail <= tol * np.abs(total)
    return total, peak


def _series_mp(nu2, rho, a, z, tol, max_terms, dps):
    with mpmath.workdps(dps):
        nu2m = mpmath.mpc(nu2.real, nu2.imag)
        zm = mpmath.mpf(float(z))
        rhom, am = mpmath.mpf(rho), mpmath.mpf(a)
        abs_nu = math.sqrt(abs(nu2))
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        for k in range(max_terms):
            term *= ((k + rhom) ** 2 - nu2m) / ((k + am + 1) * (k + 1)) * zm
            total += term
            kk = k + 1
            if kk >= 8 and kk > abs_nu:
                q = float(z) * max(((kk + rho) ** 2 + abs(nu2)) / ((kk + a + 1) * (kk + 1)), 1.0)
                if q < 1 and abs(term) * q / (1 - q) <= tol * abs(total):
                    return complex(total)
        raise TruncationError(f"multiprecision 2F1 series not converged after {max_terms} terms",
                              float(abs(term)))


def hypergeometric_psi(space: SpaceDescriptor, lam, t, *, tol=1e-14, max_terms=100_000):
    """Sum the 2F1 series for ``psi_lam(t)`` without the lattice shortcut.

    Exposed separately so tests can compare it against the polynomial route.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nu = complex(lam) + space.rho_c
    nu2 = nu * nu
    z = np.sin(t / 2) ** 2
    total, peak = _series_double(nu2, space.rho_c, space.jacobi_a, z, tol, max_terms)
    with np.errstate(divide="ignore"):
        cond = peak / np.abs(total)
    bad = np.flatnonzero(cond > _CANCELLATION_LIMIT)
    for i in bad:
        lost = math.log10(cond[i]) if np.isfinite(cond[i]) else math.log10(peak[i]) + 16
        dps = 20 + int(math.ceil(lost))
        total[i] = _series_mp(nu2, space.rho_c, space.jacobi_a, z[i], tol, max_terms, dps)
    return total


def spherical_eval(space: SpaceDescriptor, lam, t, *, tol=1e-14, max_terms=100_000):
    """Spherical function of complex degree ``lam`` at geodesic angle(s) ``t``.

    Parameters
    ----------
    space : SpaceDescriptor
    lam : complex
        Spectral parameter in the ``l`` coordinate (``n`` for ``su2-group``).
    t : float or array_like
        Geodesic angle(s) in ``[0, pi)``.  ``t = pi`` is accepted only for
        lattice degrees, where the function is a polynomial in ``cos t``.
    tol : float
        Relative truncation tolerance of the series.
    max_terms : int
        Series term budget.

    Returns
    -------
    complex or ndarray of complex
        ``psi_lam(t)``; exactly 1 at ``t = 0``.

    Raises
    ------
    RangeError
        ``t`` outside the trusted domain, or ``|Im nu| t`` beyond the overflow guard.
    TruncationError
        The series did not converge within ``max_terms``.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.abs(np.atleast_1d(t_arr))
    lam = complex(lam)
    if t_arr.size and t_arr.max() > math.pi:
        raise RangeError("geodesic angle must lie in [0, pi]")

    nu = lam + space.rho_c
    t_max = float(t_arr.max()) if t_arr.size else 0.0
    if abs(nu.imag) * t_max > OVERFLOW_EXPONENT:
        raise RangeError(f"|Im nu| * t = {abs(nu.imag) * t_max:.1f} exceeds the overflow guard")

    if space.kind == "torus":
        out = np.cos(lam * t_arr).astype(complex)
    else:
        l = lattice_degree(space, lam)
        if l is not None:
            out = _jacobi_normalized(l, space.jacobi_a, space.jacobi_b, np.cos(t_arr)).astype(complex)
        else:
            if t_max >= T_EDGE:
                raise RangeError(f"series evaluation rejected at t >= pi - 1e-6 (got t = {t_max!r})")
            out = hypergeometric_psi(space, lam, t_arr, tol=tol, max_terms=max_terms)
    return out[0] if scalar else out


@dataclass(frozen=True)
class EvalRequest:
    space: SpaceDescriptor
    lam: complex
    t: float
    tol: float = 1e-14
    max_terms: int = 100_000

    def __post_init__(self):
        if not 0 <= self.t < math.pi:
            raise ValueError("t must lie in [0, pi)")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")

    def evaluate(self) -> complex:
        return complex(spherical_eval(self.space, self.lam, self.t, tol=self.tol, max_terms=self.max_terms))


def _sinc(y):
    y = np.asarray(y, dtype=complex)
    small = np.abs(y) < 1e-4
    safe = np.where(small, 1.0, y)
    y2 = y * y
    return np.where(small, 1 - y2 / 6 + y2 * y2 / 120, np.sin(safe) / safe)


def character_eval(n, theta):
    """SU(2) character ``sin((n+1) theta/2) / sin(theta/2)``, entire in ``n``.

    The removable singularity at ``theta = 0`` is resolved with a sinc ratio;
    at ``theta = 2 pi`` it is removable only for integer ``n``.
    """
    n = complex(n)
    th = np.asarray(theta, dtype=float)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    is_int = n.imag == 0 and n.real == round(n.real)
    x = th / 2
    if is_int:
        # 4 pi periodic only for integer labels; fold to (-pi, pi]
        x = np.mod(x + math.pi, 2 * math.pi) - math.pi
    m = n + 1
    near_zero = np.abs(x) < 0.25
    out = np.empty(x.shape, dtype=complex)
    out[near_zero] = m * _sinc(m * x[near_zero]) / _sinc(x[near_zero]).real
    rest = ~near_zero
    if is_int:
        eps = np.where(x >= 0, math.pi - x, -math.pi - x)
        near_pi = rest & (np.abs(eps) < 0.25)
        sign = -1.0 if int(round(n.real)) % 2 else 1.0
        # sin(m(pi - e)) / sin(pi - e) = (-1)**n sin(m e) / sin(e)
        out[near_pi] = sign * m * _sinc(m * eps[near_pi]) / _sinc(eps[near_pi]).real
        rest &= ~near_pi
    out[rest] = np.sin(m * x[rest]) / np.sin(x[rest])
    return out[0] if scalar else out


def weight_density(space: SpaceDescriptor, t):
    """Radial density of the normalised invariant measure, integrating to 1 over ``[0, pi]``."""
    a, b = space.jacobi_a, space.jacobi_b
    t = np.asarray(t, dtype=float)
    c = 1.0 / sps.beta(a + 1, b + 1)
    return c * np.sin(t / 2) ** (2 * a + 1) * np.cos(t / 2) ** (2 * b + 1)


def log_density_derivative(space: SpaceDescriptor, t):
    """``w'(t) / w(t)`` on the open interval."""
    a, b = space.jacobi_a, space.jacobi_b
    half = np.asarray(t, dtype=float) / 2
    return (2 * a + 1) / 2 / np.tan(half) - (2 * b + 1) / 2 * np.tan(half)


def radial_laplacian(space: SpaceDescriptor, f, n_grid=4097):
    """Radial Laplace-Beltrami operator ``f'' + (w'/w) f'`` by fourth-order differences.

    ``f`` is a :class:`~pwspherical.functions.RadialFunction`; closed forms are
    sampled on a uniform grid of ``n_grid`` points over ``[0, pi]``, sampled
    inputs keep their own grid.  Smooth K-invariant functions are even about
    both ``t = 0`` and ``t = pi``, which supplies the ghost points; at the
    endpoints the singular first-order term is replaced by its limit,
    ``(2a + 2) f''(0)`` and ``(2b + 2) f''(pi)``.

    Returns the result as a sampled RadialFunction on the same grid.
    """
    from .functions import RadialFunction

    if f.form == "samples":
        grid = f.params["grid"]
        vals = np.asarray(f.params["values"])
    else:
        grid = np.linspace(0.0, math.pi, int(n_grid))
        vals = np.asarray(f(grid))
    if grid.size < MIN_LAPLACIAN_POINTS:
        raise ResolutionError(f"need at least {MIN_LAPLACIAN_POINTS} grid points, got {grid.size}")
    out = laplacian_samples(space, grid, vals)
    h = grid[1] - grid[0]
    support = None if f.support_hint is None else min(math.pi, f.support + 3 * h)
    return RadialFunction.samples(grid, out, support_hint=support)


def laplacian_samples(space: SpaceDescriptor, grid, vals):
    """Array version of :func:`radial_laplacian` on a uniform grid over ``[0, pi]``."""
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(vals)
    if grid.size < MIN_LAPLACIAN_POINTS:
        raise ResolutionError(f"need at least {MIN_LAPLACIAN_POINTS} grid points, got {grid.size}")
    h = grid[1] - grid[0]
    pad = np.concatenate([vals[2:0:-1], vals, vals[-2:-4:-1]])
    fm2, fm1, f0, fp1, fp2 = pad[:-4], pad[1:-3], pad[2:-2], pad[3:-1], pad[4:]
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    out = np.empty_like(d2)
    out[1:-1] = d2[1:-1] + log_density_derivative(space, grid[1:-1]) * d1[1:-1]
    out[0] = (2 * space.jacobi_a + 2) * d2[0]
    out[-1] = (2 * space.jacobi_b + 2) * d2[-1]
    return out
