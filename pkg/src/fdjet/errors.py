"""Exception hierarchy. Every domain error carries a stable ``code`` used by the CLI."""


class JetError(Exception):
    code = "ERROR"


class DimensionMismatchError(JetError, ValueError):
    code = "DIM_MISMATCH"


class LevelError(JetError, ValueError):
    code = "LEVEL"


class NotADiffeomorphismError(JetError, ValueError):
    code = "NOT_DIFFEO"


class NotNilpotentError(JetError, ValueError):
    code = "NOT_NILPOTENT"


class NotUnipotentError(JetError, ValueError):
    code = "NOT_UNIPOTENT"


class NotAJetError(JetError, ValueError):
    code = "NOT_A_JET"


class ValidityError(JetError, ValueError):
    code = "VALIDITY"


class SpecMismatchError(JetError, ValueError):
    code = "SPEC_MISMATCH"


class InvalidSplittingError(JetError, ValueError):
    code = "INVALID_SPLITTING"


class ContainmentError(JetError, ValueError):
    code = "CONTAINMENT"


class ParseError(JetError, ValueError):
    code = "PARSE"

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
