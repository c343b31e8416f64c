"""Tropical differential algebra over idempotent semirings, with exact arithmetic."""

from .diffpoly import *  # noqa: F401,F403
from .errors import (  # noqa: F401
    ParseError,
    ResourceLimitExceeded,
    SemiringTagError,
    TropDiffError,
    TruncationExhausted,
    TruncationWarning,
    UnsupportedEquation,
    UnsupportedTemplate,
)
from .forest import *  # noqa: F401,F403
from .seminorms import *  # noqa: F401,F403
from .semiring import *  # noqa: F401,F403
from .series import (  # noqa: F401
    DEFAULT_TRUNC,
    STRICT_SHIFT,
    PairDescriptor,
    Projection,
    StrictShift,
    TruncSeries,
    Weighted,
    boolean_pair,
    degenerate_differential,
    differentiate,
    iterate_derivative,
    padic_differential,
    parse_series,
    project,
    project_bounded,
    rank2_pair,
    separating_derivative_order,
    series_trop_vanishes,
)
from .solve import *  # noqa: F401,F403

__version__ = "0.1.0"
