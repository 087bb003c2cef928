__all__ = [
    "KnotstatError",
    "DataError",
    "DatasetNotFound",
    "SchemaError",
    "DuplicateNameError",
    "MissingDataError",
    "SplitError",
    "NumericError",
    "DomainError",
    "UndefinedCorrelationError",
    "SingularSystemError",
    "DegenerateClusterError",
    "DivergenceError",
]


class KnotstatError(Exception):
    pass


#### ------------ Data ------------- ####


class DataError(KnotstatError, ValueError):
    """ Input data is missing, malformed or violates a dataset invariant """


class DatasetNotFound(DataError, FileNotFoundError):
    pass


class SchemaError(DataError):
    """
    Raised by the dataset interfaces

    Arguments:

        rows (list):

            (row_number, message) pairs. Row numbers are 1-based file lines
            for CSV (the header is line 1) and 1-based array positions for JSON
    """

    def __init__(self, message, rows=None):
        self.rows = list(rows or [])
        if self.rows:
            details = "\n".join(
                "    row {}: {}".format(row, msg) for row, msg in self.rows
            )
            message = "{}\n{}".format(message, details)
        super().__init__(message)


class DuplicateNameError(SchemaError):
    pass


class MissingDataError(DataError):
    pass


class SplitError(DataError):
    pass


#### ------------ Numerics ------------- ####


class NumericError(KnotstatError, ArithmeticError):
    pass


class DomainError(NumericError, ValueError):
    """ Argument outside the domain of the function (log of 0, z = 0, ...) """


class UndefinedCorrelationError(NumericError):
    pass


class SingularSystemError(NumericError):
    def __init__(self, message, condition=None):
        self.condition = condition
        super().__init__(message)


class DegenerateClusterError(NumericError):
    pass


class DivergenceError(NumericError):
    pass
