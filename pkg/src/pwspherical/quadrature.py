"""Gauss-Legendre rules with node doubling as the error control."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import QuadratureError


@lru_cache(maxsize=128)
def _leggauss(n: int):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_nodes(a: float, b: float, n: int):
    """Nodes and weights of the ``n``-point rule mapped to ``[a, b]``."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_nodes(edges, n: int):
    """Flattened nodes/weights of an ``n``-point rule on every cell ``[edges[i], edges[i+1]]``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate_doubling(integrand, a, b, n0, *, rtol=1e-12, max_doublings=4, edges=None):
    """Integrate ``integrand`` over ``[a, b]``, doubling the node count until it settles.

    Two successive values are accepted when they differ by at most
    ``rtol * max(|I|, S)``, where ``S`` is the same rule applied to
    ``|integrand|``; for oscillatory or cancelling integrands the absolute
    scale is the meaningful yardstick.

    With ``edges`` given, a composite rule of ``n0`` points per cell is used
    instead of one global rule, and the per-cell count is doubled.

    Returns ``(value, error_estimate, nodes_used)``.
    """
    if b <= a:
        return 0j, 0.0, 0
    history = []
    n = int(n0)
    previous = None
    for _ in range(max_doublings + 1):
        if edges is None:
            t, w = gauss_nodes(a, b, n)
        else:
            t, w = composite_nodes(edges, n)
        vals = np.asarray(integrand(t), dtype=complex)
        value = complex(np.dot(w, vals))
        scale = float(np.dot(w, np.abs(vals)))
        history.append(value)
        if previous is not None:
            err = abs(value - previous)
            if err <= rtol * max(abs(value), scale) or scale == 0.0:
                return value, err, t.size
        previous = value
        n *= 2
    raise QuadratureError(
        f"Gauss-Legendre values did not agree to rtol={rtol:g} after {max_doublings} doublings",
        history[-2:],
    )


def integrate_rows(integrand, lo, hi, n0, *, rtol=1e-12, max_doublings=5, shared_scale=False):
    """Integrate one function per row over ``[lo[i], hi[i]]`` with a shared doubling loop.

    ``integrand`` receives a ``(rows, n)`` node array and returns values of
    the same shape.  Every row must settle under the criterion of
    :func:`integrate_doubling`; with ``shared_scale`` the yardstick is the
    largest row scale, i.e. the tolerance is relative to the sup norm of the
    result rather than to each entry.  Returns ``(values, error_estimates)``.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)[:, None]
    n = int(n0)
    previous = last = None
    for _ in range(max_doublings + 1):
        x, w = _leggauss(n)
        nodes = lo[:, None] + half * (x[None, :] + 1.0)
        vals = np.asarray(integrand(nodes), dtype=complex)
        value = (vals * (half * w[None, :])).sum(axis=1)
        scale = (np.abs(vals) * (half * w[None, :])).sum(axis=1)
        if previous is not None:
            err = np.abs(value - previous)
            yard = np.maximum(np.abs(value), scale)
            if shared_scale:
                yard = np.full_like(yard, yard.max(initial=0.0))
            excess = err - rtol * yard
            if np.all(excess <= 0):
                return value, err
        else:
            excess = None
        last, previous = previous, value
        n *= 2
    bad = int(np.argmax(excess))
    raise QuadratureError(
        f"row {bad} did not settle to rtol={rtol:g} after {max_doublings} doublings",
        [last[bad], previous[bad]],
    )
