"""Exception hierarchy shared by all modules."""


class BargmannError(Exception):
    """Base class for every error raised by the package."""


class InputError(BargmannError, ValueError):
    """Malformed input: wrong shapes, non-symmetric data, bad files."""


class DivergentIntegralError(BargmannError):
    """A Gaussian integral whose quadratic part is not decaying."""


class HypothesisFailed(BargmannError):
    """A hypothesis of the boundedness theorem does not hold.

    ``condition`` names the failing inequality (``"majorization"``,
    ``"nondegeneracy"``, ``"re_lambda"``), ``value`` carries the number
    that violated it.
    """

    def __init__(self, message, condition=None, value=None):
        super().__init__(message)
        self.condition = condition
        self.value = value


class SpectralObstruction(BargmannError):
    """The fundamental matrix has an eigenvalue at (or too close to) +-2."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotAGraph(BargmannError):
    """An image plane does not project bijectively onto the x-space."""


class NotLagrangianConsistent(BargmannError):
    """Recovered weight data is not symmetric/Hermitian within tolerance."""


class PositivityViolation(BargmannError):
    """Im F restricted to the weight plane is not positive semidefinite."""


class TruncationError(BargmannError):
    """Quadrature box too small: integrand mass on the boundary."""

    def __init__(self, message, suggested_radius=None):
        super().__init__(message)
        self.suggested_radius = suggested_radius
