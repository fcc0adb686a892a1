"""Exception types shared across the package."""


class G2Error(Exception):
    """Base class for every error raised by this package."""


# -- metric graphs ----------------------------------------------------------

class NonZeroMassError(G2Error):
    """The source measure of a Poisson problem does not have total mass zero."""


class DisconnectedError(G2Error):
    """The graph is not connected."""


class NonProbabilityMeasureError(G2Error):
    """A probability measure (total mass one) was required."""


class InterpolationMismatchError(G2Error):
    """The per-edge quadratic ansatz for the diagonal Green's function failed.

    Raised when the verification point of the three-point interpolation does
    not match; this signals a bug or a measure outside the supported class,
    never a value to be silently re-fitted at higher degree.
    """


# -- graph invariants -------------------------------------------------------

class GenusZeroError(G2Error):
    """The admissible measure needs total genus at least one."""


class AdmissibilityFailureError(G2Error):
    """No measure of the assumed shape makes g(x,x) + g(K,x) constant."""


class FormulaMismatchError(G2Error):
    """Two independent formulas for the same invariant disagree."""


# -- fiber types ------------------------------------------------------------

class InvalidParamsError(G2Error):
    """Fiber-type parameters have the wrong arity or are not positive."""


class UnclassifiableError(G2Error):
    """A genus-2 graph matched none of the seven fiber-type shapes."""


# -- theta functions --------------------------------------------------------

class NotPositiveDefiniteError(G2Error):
    """The imaginary part of the period matrix is not positive definite."""


class TruncationOverflowError(G2Error):
    """The theta-series truncation radius exceeded its cap.

    This signals a nearly degenerate imaginary part rather than a tolerance
    that could be met by summing further.
    """


class DegenerateThetaNullError(G2Error):
    """An even theta-null vanishes: the surface splits into elliptic curves.

    The offending characteristic is stored on the exception.
    """

    def __init__(self, message: str, characteristic=None):
        super().__init__(message)
        self.characteristic = characteristic


class QuadratureUnstableError(G2Error):
    """The quadrature standard error exceeded ten times its target."""
