"""Catalog of rank-one spaces, the Weyl action and the lattice of spherical degrees.

Every space is described in two one-dimensional coordinates:

* the radial coordinate ``t`` is the geodesic angle from the origin, with the
  injectivity radius normalised to ``pi``;
* the spectral coordinate ``l`` is scaled so that the spherical degrees are
  exactly the non-negative integers (for the torus, all integers; for SU(2)
  viewed as a group, the ``n = 2l`` labels of its irreducible representations).

Root multiplicities enter only through the Jacobi exponents ``(a, b)``::

    a = (m_alpha + m_2alpha - 1) / 2,   b = (m_2alpha - 1) / 2,

so that the radial part of the Laplacian has density
``sin(t/2)**(2a+1) * cos(t/2)**(2b+1)`` and the Weyl-fixed point sits at
``-rho_c`` with ``rho_c = (a + b + 1) / 2``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import CatalogError

KINDS = ("rank-one-symmetric", "torus", "group-su2")


@dataclass(frozen=True)
class SpaceDescriptor:
    name: str
    kind: str
    jacobi_a: float
    jacobi_b: float
    rho_c: float
    inj_radius_t: float = math.pi
    omega_radius_t: float = math.pi / 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.jacobi_a < -0.5 or self.jacobi_b < -0.5:
            raise ValueError("Jacobi exponents must be >= -1/2")
        if not 0 < self.omega_radius_t <= self.inj_radius_t:
            raise ValueError("need 0 < omega_radius_t <= inj_radius_t")
        if self.kind == "rank-one-symmetric":
            expected = (self.jacobi_a + self.jacobi_b + 1) / 2
            if abs(self.rho_c - expected) > 1e-15:
                raise ValueError(f"rho_c must equal (a+b+1)/2 = {expected}")

    @property
    def two_sided(self) -> bool:
        return self.kind == "torus"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict) -> "SpaceDescriptor":
        return cls(**data)


def _sphere(n: int) -> SpaceDescriptor:
    a = (n - 2) / 2
    return SpaceDescriptor(f"s{n}", "rank-one-symmetric", a, a, (2 * a + 1) / 2)


def _complex_projective(n: int) -> SpaceDescriptor:
    a, b = float(n - 1), 0.0
    return SpaceDescriptor(f"cp{n}", "rank-one-symmetric", a, b, (a + b + 1) / 2)


_CATALOG = {
    # a = b = -1/2 turns the Jacobi machinery into plain cosine series.
    "torus": SpaceDescriptor("torus", "torus", -0.5, -0.5, 0.0, math.pi, math.pi),
    "s2": _sphere(2),
    "s3": _sphere(3),
    "s4": _sphere(4),
    "s5": _sphere(5),
    "cp2": _complex_projective(2),
    # SU(2) = S^3 as a manifold; t is half the conjugacy angle, degrees are n = 2l.
    "su2-group": SpaceDescriptor("su2-group", "group-su2", 0.5, 0.5, 1.0),
}

SPACE_NAMES = tuple(_CATALOG)


def catalog_space(name: str) -> SpaceDescriptor:
    """Return the descriptor registered under ``name``.

    >>> catalog_space("s2").rho_c
    0.5
    """
    try:
        return _CATALOG[name]
    except KeyError:
        raise CatalogError(name, SPACE_NAMES) from None


def weyl_reflect(space: SpaceDescriptor, lam):
    """The non-trivial Weyl element acting on the shifted parameter: ``lam -> -lam - 2 rho_c``."""
    return -lam - 2 * space.rho_c


def spherical_lattice(space: SpaceDescriptor, l_max: float) -> np.ndarray:
    """Integer degrees of spherical representations up to ``l_max``.

    Two-sided for the torus, non-negative otherwise.  For ``su2-group`` the
    entries are the ``n`` labels, so ``l = n/2`` runs through half-integers.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    top = int(math.floor(l_max + 1e-12))
    if space.two_sided:
        return np.arange(-top, top + 1)
    return np.arange(0, top + 1)


@dataclass(frozen=True)
class RadiusBounds:
    r_forward_conservative: float
    r_forward_sharp: float
    r_unique: float
    inj_radius_t: float

    def as_tuple(self):
        return (self.r_forward_conservative, self.r_forward_sharp, self.r_unique, self.inj_radius_t)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def radius_bounds(space: SpaceDescriptor) -> RadiusBounds:
    """Support radii up to which the forward estimate and uniqueness are guaranteed.

    The conservative forward radius is the half-width of the region where the
    continued spherical functions obey the exponential estimate.  The closed
    form continuation converges on all of ``t < pi``, which gives the sharp
    value.  Uniqueness from lattice values holds below type ``pi`` in the
    ``l`` coordinate (Carlson).
    """
    return RadiusBounds(
        r_forward_conservative=space.omega_radius_t,
        r_forward_sharp=space.inj_radius_t,
        r_unique=math.pi,
        inj_radius_t=space.inj_radius_t,
    )


def expected_dimension(space: SpaceDescriptor, l: int) -> float:
    """Closed-form representation dimension for catalog entries.

    Used only to cross-check the quadrature-based reciprocal norms.
    """
    if l < 0 and not space.two_sided:
        raise ValueError("degree must be non-negative")
    if space.kind == "torus":
        return 1.0
    if space.kind == "group-su2":
        return float((l + 1) ** 2)
    if space.name.startswith("s"):
        n = int(space.name[1:])
        return (2 * l + n - 1) / (n - 1) * math.comb(l + n - 2, l)
    if space.name.startswith("cp"):
        n = int(space.name[2:])
        return (2 * l + n) / n * math.comb(l + n - 1, l) ** 2
    raise ValueError(f"no closed-form dimension for {space.name!r}")
