"""Exception hierarchy shared across the library.

Every error carries a machine-readable ``code`` (snake_case class name) and a
``context`` dict so the CLI can emit structured error objects. ``kind`` is
either "domain" (bad inputs, violated preconditions) or "numeric" (an
algorithm failed to converge); the CLI maps these to exit codes 2 and 3.
"""

import re

_CAMEL = re.compile(r"(?<!^)(?=[A-Z])")


class MBIntError(Exception):
    kind = "domain"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    @property
    def code(self):
        return _CAMEL.sub("_", type(self).__name__).lower()


class PoleError(MBIntError):
    """Evaluation point collides with a gamma-function pole."""


class DomainError(MBIntError):
    """Argument outside the range where an operation is meaningful."""


class ParameterError(MBIntError):
    """Parameter set violates a structural invariant."""


class OrderError(MBIntError):
    """Split indices m, n outside the admissible 0..q / 0..p ranges."""


class DegenerateMatrixError(MBIntError):
    """Coefficient matrix with an identically zero top row or column."""


class RepeatedRootError(MBIntError):
    """A polynomial required to have simple roots has a repeated one."""


class DegreeError(MBIntError):
    """Coefficient degrees incompatible with the closed-form solution."""


class DivergenceError(MBIntError):
    """Integral transform diverges for the requested parameters."""


class InvalidDenominatorError(MBIntError):
    """Series denominator parameter is a non-positive integer."""


class DivergentSeriesError(MBIntError):
    """Series evaluation requested outside its convergence domain."""


class ContourError(MBIntError):
    """No admissible integration contour for the requested evaluation."""


class HigherOrderPoleError(MBIntError):
    """Residue summation over a pole family with a multiple pole."""


class RootFindingError(MBIntError):
    kind = "numeric"


class QuadratureError(MBIntError):
    kind = "numeric"


class ConvergenceError(MBIntError):
    kind = "numeric"


class NonConvergentSeriesError(MBIntError):
    kind = "numeric"
