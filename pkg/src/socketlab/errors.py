"""Exception types shared across socketlab.

``InputError`` covers malformed or inconsistent inputs (CLI exit code 2);
``ComputationError`` covers failures that only show up while computing
(singular matrices, non-convergence, layout that does not fit; exit code 1).
"""


class SocketlabError(Exception):
    pass


class InputError(SocketlabError, ValueError):
    pass


class ComputationError(SocketlabError, ArithmeticError):
    pass


class ParseError(InputError):
    """Raised by the file parsers; ``lineno`` is 1-based (None if unknown)."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SingularNetworkError(ComputationError):
    pass


class ConvergenceError(ComputationError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
