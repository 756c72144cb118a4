"""Exception hierarchy shared across the pipeline."""


class RstIdsError(Exception):
    """Base class for all package errors."""


class DataError(RstIdsError):
    """Problem with input data; the CLI maps these to exit code 2."""


class RecordError(DataError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class FieldCountError(RecordError):
    pass


class NumericParseError(RecordError):
    pass


class UnknownSymbolError(RecordError):
    pass


class UnknownAttackError(RecordError):
    pass


class EmptyClassError(DataError):
    pass


class EmptyDataError(DataError):
    pass


class MaskMismatchError(RstIdsError):
    pass


class UnknownAttributeError(RstIdsError):
    pass


class EmptyUniverseError(DataError):
    pass


class DimensionMismatchError(RstIdsError):
    pass


class SingleClassError(DataError):
    pass


class FormatVersionError(DataError):
    """Model or artifact file is truncated, corrupt or from another format version."""


class ModelError(RstIdsError):
    pass


class LengthMismatchError(RstIdsError):
    pass


class EmptyError(RstIdsError):
    pass


class EmptyMatrixError(RstIdsError):
    pass


class MissingArtifactError(DataError):
    pass


class NonConvergenceWarning(RuntimeWarning):
    """SMO stopped with KKT violations left above tolerance."""
