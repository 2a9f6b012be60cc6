"""Exception hierarchy shared by all modules."""


class HTwistError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(HTwistError):
    pass


class DimError(HTwistError):
    pass


class AlgebraMismatch(HTwistError):
    pass


class NonHomogeneous(HTwistError):
    pass


class InfiniteSlice(HTwistError):
    pass


class CompositionNonzero(HTwistError):
    """d_out . d_in is not the zero map."""


class JacobiFail(HTwistError):
    pass


class InvalidInput(HTwistError):
    pass


class ImageEscapesCochains(HTwistError):
    pass


class NotDegree4(HTwistError):
    pass


class NotNilpotent(HTwistError):
    pass


class BNotClosed(HTwistError):
    pass


class NoSolution(HTwistError):
    pass


class CourantAxiomFail(HTwistError):
    pass


class NilpotenceFail(HTwistError):
    """Raised when an assembled Q fails [Q,Q] = 0 for valid input (internal sign bug)."""


class DocumentError(InvalidInput):
    """Malformed input document; ``where`` names the offending field."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where
