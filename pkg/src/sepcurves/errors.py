"""Exception taxonomy shared by every layer of the library.

The CLI maps these onto exit codes: invalid input -> 3, undetermined
precision -> 2, internal consistency violations -> 4.  Certified verdicts
(separating or not, hyperbolic or not) are *results*, never exceptions.
"""


class SepcurvesError(Exception):
    """Base class for all library errors."""

    code = "error"


class InvalidInputError(SepcurvesError):
    """Caller-supplied data violates a documented precondition."""

    code = "invalid-input"


class ParseError(InvalidInputError):
    """Polynomial text could not be parsed; carries line/column."""

    code = "parse-error"

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SingularCurveError(InvalidInputError):
    """The curve is singular; ``witness`` is a candidate singular-point box."""

    code = "singular-curve"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateSystemError(InvalidInputError):
    """Two forms share a common component, so their intersection is not finite."""

    code = "common-component"


class AmbiguousBasePointError(InvalidInputError):
    """Base-point multiplicities differ between the two pencil members."""

    code = "ambiguous-base-point"


class PrecisionError(SepcurvesError):
    """Sign or separation undetermined after reaching the precision cap."""

    code = "undetermined"


class FrameSearchError(SepcurvesError):
    """No generic coordinate frame found within the deterministic budget."""

    code = "frame-search-exhausted"


class InternalCheckError(SepcurvesError):
    """An internal cross-check failed; indicates a bug, not bad input."""

    code = "internal-check"
