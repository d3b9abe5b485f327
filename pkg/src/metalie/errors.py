"""Exception hierarchy shared by all modules."""


class MetalieError(Exception):
    pass


class FieldMismatchError(MetalieError):
    pass


class RankMismatchError(MetalieError):
    pass


class ContextMismatchError(MetalieError):
    pass


class NotAUnitError(MetalieError):
    """Raised when inverting an element of the maximal ideal."""


class EmptyInputError(MetalieError):
    pass


class NotInFittingError(MetalieError):
    pass


class NotInAlgebraError(MetalieError):
    pass


class PresentationError(MetalieError):
    pass


class RelationViolationError(MetalieError):
    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class VerificationFailure(MetalieError):
    """An implication or construction that must hold was found to fail."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class ParseError(MetalieError):
    def __init__(self, message, pos=0, text=""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


class NotInDeltaError(MetalieError):
    """Raised when a polynomial required to vanish at the origin does not."""


class ZeroElementError(MetalieError):
    """Raised when an operation needs nonzero inputs."""


class SingularSystemError(VerificationFailure):
    pass
