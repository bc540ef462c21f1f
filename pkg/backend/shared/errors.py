"""Error hierarchy shared by every setint package.

Each error also derives from the closest builtin so callers may catch either
``SetIntError`` or, say, ``ValueError``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Sequence


class SetIntError(Exception):
    """Base class for setint errors."""


class EmptyBodyError(SetIntError, ValueError):
    """A convex body would have no points."""


class DimensionMismatchError(SetIntError, ValueError):
    """Operands live in different ambient dimensions."""


class NegativeScaleError(SetIntError, ValueError):
    """A body was multiplied by a negative scalar."""


class GridMismatchError(SetIntError, ValueError):
    """Support vectors (or an oracle) sampled on incompatible direction grids."""


class InconsistentSupportError(SetIntError, ValueError):
    """A support vector is not the support function of any body on its grid."""


class UnsupportedDimensionError(SetIntError, NotImplementedError):
    """The operation has no implementation in this ambient dimension."""


class UnboundedGaugeRefusedError(SetIntError, ValueError):
    """A gauge without a recorded positive lower bound was given to a generator."""


class DepthLimitError(SetIntError, ValueError):
    """Requested dyadic depth exceeds the supported maximum."""


class UnknownCatalogEntryError(SetIntError, ValueError):
    """A multifunction name is not in the catalog."""


class MetadataViolationError(SetIntError, ValueError):
    """Declared multifunction metadata failed grid verification."""


class UnboundedMultifunctionError(SetIntError, ValueError):
    """An integrator needs a bound M the multifunction does not declare."""


class OracleUnavailableError(SetIntError, ValueError):
    """The multifunction has neither analytic nor closed-form support."""


class NoConvergenceError(SetIntError, RuntimeError):
    """An integrator exhausted its refinement budget before meeting its target.

    Args:
        method (str): Integrator that gave up.
        trace (Sequence[Any]): Trace points measured before giving up.
        partial (Any): Last partial ``IntegralResult``, if one was formed.
    """

    def __init__(
        self,
        message: str,
        *,
        method: str,
        trace: Sequence[Any] = (),
        partial: Any = None,
    ):
        super().__init__(message)
        self.method = method
        self.trace = tuple(trace)
        self.partial = partial


class FixtureError(SetIntError, ValueError):
    """An oracle fixture file is malformed or disagrees with its version hash."""


class ScenarioError(SetIntError, ValueError):
    """A scenario file is unreadable, not JSON, or fails validation."""
