"""Exception hierarchy with stable machine-readable codes."""


class FoliaError(Exception):
    code = "E_INTERNAL"
    exit_status = 1

    def __init__(self, message="", **detail):
        super().__init__(message)
        self.detail = detail


class PreconditionError(FoliaError):
    code = "E_PRECONDITION"
    exit_status = 2


class ContextError(PreconditionError):
    """Two scalars or jets from incompatible computation contexts were mixed."""

    code = "E_CONTEXT"


class ZeroFormError(PreconditionError):
    code = "E_ZERO_FORM"


class NonIsolatedError(PreconditionError):
    code = "E_NON_ISOLATED"


class NonReducedError(PreconditionError):
    code = "E_NON_REDUCED"


class IdenticalFoliationsError(PreconditionError):
    code = "E_IDENTICAL_FOLIATIONS"


class NotASymmetryError(PreconditionError):
    code = "E_NOT_SYMMETRY"


class NotAxisPreservingError(PreconditionError):
    code = "E_NOT_AXIS_PRESERVING"


class ParseError(PreconditionError):
    code = "E_SYNTAX"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class NonPolynomialError(ParseError):
    code = "E_NON_POLYNOMIAL"


class UnresolvedLocusError(PreconditionError):
    """A point or eigenvalue needs an algebraic number outside the supported fields."""

    code = "E_UNRESOLVED_LOCUS"


class ResourceError(FoliaError):
    exit_status = 3


class DepthLimitError(ResourceError):
    code = "E_DEPTH_LIMIT"


class InsufficientOrderError(ResourceError):
    code = "E_INSUFFICIENT_ORDER"


class InconclusiveError(ResourceError):
    """A decision could not be certified at the configured jet order; raise N."""

    code = "E_INCONCLUSIVE"


class ClassificationError(FoliaError):
    code = "E_INTERNAL"
