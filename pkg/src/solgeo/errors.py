"""Exception hierarchy.

Validation problems (bad input, wrong matrix class) and numerical failures
(overflow, integrator breakdown, degenerate index data) are kept apart so the
command-line front end can map them to distinct exit codes.
"""


class SolGeoError(Exception):
    """Base class for every error raised by :mod:`solgeo`."""


class ValidationError(SolGeoError, ValueError):
    """Input violates a precondition (exit code 2 on the command line)."""


class NumericalError(SolGeoError, ArithmeticError):
    """A computation could not be carried out reliably (exit code 3)."""


class ExponentOverflowError(NumericalError, OverflowError):
    def __init__(self, msg="exponent overflow"):
        super().__init__(msg)


class StiffTrajectoryError(NumericalError):
    def __init__(self, msg="stiff trajectory"):
        super().__init__(msg)


class DegenerateError(NumericalError):
    """Endpoint or length sits exactly on a degenerate stratum."""
