"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CoenrollError(Exception):
    exit_code = 3


class ParseError(CoenrollError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(CoenrollError):
    pass


class TaxonomyError(CoenrollError):
    pass


class UndefinedMetricError(CoenrollError):
    exit_code = 4


class InfeasibleError(CoenrollError):
    """Generation or intervention request that cannot be satisfied."""

    exit_code = 4


class DataWarning(UserWarning):
    """Recoverable data problem (duplicate rows, unknown course prefix)."""
