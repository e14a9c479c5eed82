"""Exact computations with polyhedral asymmetric norms and their operators."""

from ._rational import (
    INF,
    AsymlinError,
    CapacityError,
    DimensionError,
    DomainError,
    InputError,
    parse_rational,
)
from .bilinear import *  # noqa: F401,F403
from .instances import *  # noqa: F401,F403
from .linear import *  # noqa: F401,F403
from .polyhedral import (
    DEFAULT_LIMITS,
    Limits,
    LpOutcome,
    LpStatus,
    Polyhedron,
    box,
    conv_decompose,
    enumerate_v_rep,
    polar,
    pulling_triangulation,
    recession_cone,
    solve_lp,
)
from .precompact import *  # noqa: F401,F403
from .space import *  # noqa: F401,F403

__version__ = "0.1.0"
