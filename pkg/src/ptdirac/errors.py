"""Exception hierarchy shared by every module of the package."""


class PtDiracError(Exception):
    """Base class for all package errors."""


class InvalidModelError(PtDiracError, ValueError):
    """Model parameters violate a stated invariant (mu <= 0, alpha == 0, ...)."""


class PreconditionError(PtDiracError, ValueError):
    """An input does not satisfy an operation's precondition."""


class EvaluationError(PtDiracError, ValueError):
    """A profile returned a non-finite value."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class UnsupportedProfileError(PtDiracError, ValueError):
    """A profile without an analytic derivative was used where one is required."""


class ZeroModeError(PtDiracError, ValueError):
    """Spinor reconstruction requested at eps == 0."""


class BranchRejectedError(PtDiracError, ValueError):
    def __init__(self, tag, tau_prime):
        super().__init__(
            f"branch {tag} rejected: Re(tau') = {tau_prime.real:.6g} admits no decaying level"
        )
        self.tag = tag
        self.tau_prime = tau_prime


class SingularQuantizationError(PtDiracError, ArithmeticError):
    """The quantization condition does not depend on the energy."""


class UnsupportedDegreeError(PtDiracError, ValueError):
    """Rodrigues construction requested above the degree cap."""


class TranscriptionFlagError(PtDiracError, ArithmeticError):
    """A printed closed-form expansion disagrees with its definitional route."""

    def __init__(self, message, printed, definitional):
        super().__init__(message)
        self.printed = printed
        self.definitional = definitional


class SingularVelocityError(PtDiracError, ValueError):
    def __init__(self, zero_crossings):
        pts = ", ".join(f"{z:.6g}" for z in zero_crossings)
        super().__init__(f"Fermi velocity profile vanishes on the grid near x = [{pts}]")
        self.zero_crossings = list(zero_crossings)


class NumericFailure(PtDiracError, RuntimeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainTooSmallError(PtDiracError, ValueError):
    """The potential has not decayed at the edge of the box; enlarge the half-width."""
