"""Reference implementations that share no code with the package."""

import math

import mpmath
import numpy as np
from scipy import integrate


def legendre_recurrence(l, x):
    """P_l(x) by the three-term (Bonnet) recurrence."""
    x = np.asarray(x, dtype=float)
    p0, p1 = np.ones_like(x), x.copy()
    if l == 0:
        return p0
    for k in range(1, l):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def gegenbauer_normalized(l, alpha, x):
    """C_l^alpha(x) / C_l^alpha(1) by recurrence; spherical functions of S^{2 alpha + 2}."""
    x = np.asarray(x, dtype=float)
    c0, c1 = np.ones_like(x), 2 * alpha * x
    if l == 0:
        return c0
    for k in range(1, l):
        c0, c1 = c1, (2 * (k + alpha) * x * c1 - (k + 2 * alpha - 1) * c0) / (k + 1)
    norm = math.comb(l + int(2 * alpha) - 1, l) if float(2 * alpha).is_integer() else None
    if norm is None:
        norm = math.gamma(l + 2 * alpha) / (math.gamma(2 * alpha) * math.factorial(l))
    return c1 / norm


def hyp_psi(a, b, lam, t, dps=30):
    """psi_lam(t) = 2F1(-lam, lam+a+b+1; a+1; sin^2(t/2)) in multiprecision."""
    with mpmath.workdps(dps):
        z = mpmath.sin(mpmath.mpf(t) / 2) ** 2
        lam = mpmath.mpc(lam)
        return complex(mpmath.hyp2f1(-lam, lam + a + b + 1, a + 1, z))


def sphere_weight(a, b, t):
    return (math.sin(t / 2) ** (2 * a + 1) * math.cos(t / 2) ** (2 * b + 1)
            / math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2)))


def quad_transform(fn, a, b, lam, r):
    """int_0^r fn(t) psi_lam(t) w(t) dt with adaptive quadrature and mpmath psi."""
    def re(t):
        return (fn(t) * hyp_psi(a, b, lam, t, dps=20) * sphere_weight(a, b, t)).real

    def im(t):
        return (fn(t) * hyp_psi(a, b, lam, t, dps=20) * sphere_weight(a, b, t)).imag

    return complex(integrate.quad(re, 0, r, limit=200, epsabs=1e-14, epsrel=1e-12)[0],
                   integrate.quad(im, 0, r, limit=200, epsabs=1e-14, epsrel=1e-12)[0])


def bump(t, r, p=1.0):
    x = abs(t) / r
    return math.exp(p - p / (1 - x * x)) if x < 1 else 0.0


def su2_trace_angle(theta, t):
    """Conjugacy angle of k_theta a_t via cos(psi/2) = cos(theta/2) cos(t/2)."""
    return 2 * math.acos(max(-1.0, min(1.0, math.cos(theta / 2) * math.cos(t / 2))))
