"""Spherical Fourier analysis on compact rank-one symmetric spaces.

Transforms of radial (K-invariant) functions, their holomorphic extension in
the spectral parameter, exponential-type measurement, and the SU(2) group
case with its K-averaging bridge to the 2-sphere.
"""

from .errors import (
    CatalogError,
    DegenerateInputError,
    DSLError,
    NumericError,
    PWError,
    QuadratureError,
    RangeError,
    ResolutionError,
    TruncationError,
)
from .functions import ClassFunction, RadialFunction
from .geometry import SPACE_NAMES, SpaceDescriptor, catalog_space, radius_bounds, spherical_lattice, weyl_reflect
from .special import character_eval, radial_laplacian, spherical_eval, weight_density
from .transform import (
    CoefficientTable,
    coefficient_table,
    decay_profile,
    dimension,
    eigen_check,
    forward,
    parseval_check,
    synthesize,
    synthesize_adaptive,
)
from .holo import (
    PWReport,
    RaySamples,
    TypeFitReport,
    carlson_sharpness,
    extend_on_ray,
    fit_exponential_type,
    pw_membership,
    support_radius,
)
from .groupcase import (
    GroupCoefficientTable,
    group_pw_check,
    group_table,
    group_transform,
    k_average,
    support_transfer_check,
    weyl_integrate,
)
from .dsl import parse_function_dsl

__version__ = "0.1.0"
