"""Exception types shared across the package."""


class KrawpolyError(Exception):
    """Base class for all library errors."""


class InputError(KrawpolyError, ValueError):
    """Invalid arguments (bad axis pair, index outside a level, bad parameters)."""


class DomainError(KrawpolyError, ValueError):
    """A formula was evaluated outside the range where it is defined."""


class NotARotationError(InputError):
    """A matrix failed the orthogonality or determinant check."""


class NonPrincipalRotationError(KrawpolyError):
    """The rotation has an eigenvalue -1, so no principal real logarithm exists."""


class NonGenericRotationError(KrawpolyError):
    """A route divides by rotation entries that vanish for this rotation.

    ``report`` holds the :class:`~krawpoly.family.GenericityReport` that
    triggered the failure.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InconsistencyError(KrawpolyError):
    """The oracle matrix cannot be factored as amplitude times polynomial."""


class SingularParametrizationError(KrawpolyError):
    """A parameter conversion would divide by zero.

    ``parameter`` names the quantity that is singular and ``denominator`` the
    vanishing expression.
    """

    def __init__(self, parameter, denominator):
        super().__init__(f"singular parametrization: {parameter} (denominator {denominator} vanishes)")
        self.parameter = parameter
        self.denominator = denominator
