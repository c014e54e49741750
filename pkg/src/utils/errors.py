"""
Exception types shared by every tda-stats package
"""


class TDAError(Exception):
    """Base class for all tda-stats errors"""


class ValidationError(TDAError, ValueError):
    """An argument or precondition of an operation does not hold"""


class DataError(TDAError):
    """Input file is unreadable or malformed"""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f'{path}:{line}: ' if line is not None else f'{path}: '
        super().__init__(f'{location}{message}')


class SchemaError(DataError):
    """Summary file does not match any known schema"""
