"""Exception hierarchy.

Data problems (parse failures, bad counts) derive from ``DataError`` and
model/input shape problems from ``ArityMismatchError`` so the command line
can map them onto distinct exit codes.
"""


class BoilRangeError(ValueError):
    """Base class for every error raised by this package."""


class DataError(BoilRangeError):
    """Malformed or unusable dataset."""


class MissingHeaderError(DataError):
    pass


class UnknownColumnError(DataError):
    def __init__(self, column, position):
        self.column = column
        self.position = position
        super().__init__(f"unknown or misplaced column {column!r} at position {position}")


class NonNumericCellError(DataError):
    """A cell that does not parse as a decimal real. ``row`` and ``col`` are 1-based."""

    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"row {row}, column {col}: cannot parse {value!r} as a number")


class WrongArityError(DataError):
    def __init__(self, row, expected, got):
        self.row = row
        self.expected = expected
        self.got = got
        if row is None:
            msg = f"dataset has {got} rows, need at least {expected}"
        else:
            msg = f"row {row}: expected {expected} cells, got {got}"
        super().__init__(msg)


class EmptyDatasetError(WrongArityError):
    def __init__(self):
        super().__init__(None, 1, 0)


class InvalidTrainCountError(DataError):
    pass


class InvalidCountError(DataError):
    pass


class TooFewRowsError(DataError):
    pass


class EmptyTrainSetError(TooFewRowsError):
    pass


class EmptyTestSetError(DataError):
    pass


class MissingTargetError(DataError):
    pass


class ArityMismatchError(BoilRangeError):
    """Feature vector length does not match what a model or scaler was fitted on."""


class SingularSystemError(BoilRangeError):
    pass


class NonPositiveSigmaError(BoilRangeError):
    pass


class EmptyCandidatesError(BoilRangeError):
    pass


class InvalidHiddenCountError(BoilRangeError):
    pass


class EmptyBatchError(BoilRangeError):
    pass


class LengthMismatchError(BoilRangeError):
    pass


class EmptyInputError(BoilRangeError):
    pass


class EmptyRowsError(BoilRangeError):
    pass


class ArchiveError(BoilRangeError):
    """Unreadable or incompatible model archive."""
