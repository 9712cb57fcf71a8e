"""Exception hierarchy shared by all modules.

Every error carries the CLI exit code it maps to: 2 for malformed input,
1 for well-formed input on which a checked property is false.
"""


class VonStaudtError(Exception):
    exit_code = 2


class MalformedInput(VonStaudtError):
    exit_code = 2


class ParseError(MalformedInput):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)


class FieldMismatch(MalformedInput):
    pass


class ShapeMismatch(MalformedInput):
    pass


class NotInvertible(VonStaudtError):
    exit_code = 1


class VerificationFailed(VonStaudtError):
    exit_code = 1


class NotASolution(VerificationFailed):
    pass


class FrameError(VerificationFailed):
    pass


class ExtractionError(VerificationFailed):
    pass


class ArrangementError(VerificationFailed):
    pass


class GuardExceeded(MalformedInput):
    pass
