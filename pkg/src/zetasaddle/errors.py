"""Exception hierarchy shared by all modules."""


class ZetaSaddleError(Exception):
    """Base class for numerical failures raised by this package."""


class PoleError(ZetaSaddleError, ValueError):
    """Argument sits on a pole (gamma at a non-positive integer)."""


class SingularityError(ZetaSaddleError, ValueError):
    """Argument sits on a singularity of a multivalued function (zero base,
    w = 2*pi*i*k for the phase function, vanishing prefactor)."""


class OutOfRangeError(ZetaSaddleError, ValueError):
    """Parameters outside the validity range of a method."""


class ConvergenceError(ZetaSaddleError):
    """An iterative method exhausted its budget."""


class IndexBandError(ZetaSaddleError):
    """Newton converged to a saddle outside the requested index band."""


class DegenerateSaddleError(ZetaSaddleError):
    """psi'' vanishes (relative to higher derivatives) at a saddle, i.e. two
    saddles are coalescing."""


class TracerError(ZetaSaddleError):
    """Descent-path tracing failed or produced an inconsistent topology."""
