"""Exception hierarchy.

Every failure raised on purpose by clusternet derives from `ClusternetError`, and
also from the closest builtin so callers that only know `ValueError` /
`ArithmeticError` keep working.

The CLI maps:
- ConfigError -> exit 2
- QuadratureError (and subclasses) -> exit 3
"""

from __future__ import annotations
from typing import Optional, Sequence


class ClusternetError(Exception):
    """Base class for all clusternet errors."""


class ConfigError(ClusternetError, ValueError):
    """Invalid experiment configuration.

    `field` is the dotted path of the offending key (e.g. `network.fading.kind`),
    `line` the 1-based YAML line when the parser reported one.
    """

    def __init__(self, message: str, *, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field={field}")
        if line is not None:
            where.append(f"line={line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class QuadratureError(ClusternetError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(
        self, operation: str, estimates: Sequence[float], tolerance: float, detail: str = ""
    ):
        self.operation = operation
        self.estimates = tuple(float(e) for e in estimates)
        self.tolerance = float(tolerance)
        last = ", ".join(f"{e:.12g}" for e in self.estimates[-2:])
        msg = f"{operation}: no convergence to tol={tolerance:.3g}; last estimates [{last}]"
        if detail:
            msg = f"{msg}; {detail}"
        super().__init__(msg)

    @property
    def last_error(self) -> float:
        if len(self.estimates) < 2:
            return float("nan")
        return abs(self.estimates[-1] - self.estimates[-2])


class DerivativeInstabilityError(QuadratureError):
    """Richardson-extrapolated derivative estimates disagree."""


class UnsupportedOperationError(ClusternetError, NotImplementedError):
    """The model has no closed form for the requested operation."""


class DivergentMomentError(ClusternetError, ArithmeticError):
    """A requested moment of the fading law is infinite."""


class DivergentMeanError(ClusternetError, ArithmeticError):
    """Mean interference diverges (singular path loss seen from inside a cluster)."""


class SingularPathLossError(ClusternetError, ValueError):
    """Singular path loss evaluated at zero distance."""
