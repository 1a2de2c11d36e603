"""Exception types shared across the package."""


class QMetricError(Exception):
    """Base class for all errors raised by qmetric."""


class InvalidParameterError(QMetricError, ValueError):
    """An argument is outside its documented domain."""


class UndefinedResultError(QMetricError, ValueError):
    """The requested statistic is undefined for the given data (e.g. zero variance)."""


class DataError(QMetricError):
    """Malformed or inconsistent input data.

    ``line`` is the 1-based line number in the offending file, when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
