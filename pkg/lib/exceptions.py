class CustomException(Exception):
    """
    Base for all custom exceptions
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message)
        self.message = message
        self.exception = exception

    def __str__(self):
        if self.exception:
            return f"{self.message}\nException: {self.exception}"

        return self.message


class GraphError(CustomException):
    """
    Base exception for graph construction and queries
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class InvalidGraphParametersError(GraphError):
    """
    G(n, p) parameters out of range
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class InvalidVertexError(GraphError):
    """
    Vertex id outside 0..n-1 or a degenerate vertex pair
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class NotATreeError(GraphError):
    """
    A rooted-tree operation received a graph that is not a tree
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class EdgeListFormatError(GraphError):
    """
    Malformed edge-list or colouring fixture file
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class ColouringError(CustomException):
    """
    Base exception for the colouring processes
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class InvalidRadiusError(ColouringError):
    """
    Local colouring requested with radius below 1
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class PathCoverError(CustomException):
    """
    Base exception for path cover computations
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class ComponentTooLargeError(PathCoverError):
    """
    A red-purple component exceeds the exact-search size cap
    """

    def __init__(
        self,
        message,
        size: int,
        size_cap: int,
        component_id: int | None = None,
        exception: Exception | None = None,
    ):
        super().__init__(message, exception)
        self.size = size
        self.size_cap = size_cap
        self.component_id = component_id


class EnumerationTooLargeError(CustomException):
    """
    An exhaustive oracle was asked to enumerate beyond its cap
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class PropertyViolationError(CustomException):
    """
    Input does not satisfy the structural precondition of a check
    """

    def __init__(self, message, violation: str | None = None, exception: Exception | None = None):
        super().__init__(message, exception)
        self.violation = violation


class OccupancyError(CustomException):
    """
    Balls-in-bins arguments out of range
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class RegimeError(CustomException):
    """
    Parameters outside the regime an audit is defined for
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class RevealProcessError(CustomException):
    """
    The edge revealing process failed to stabilise
    """

    def __init__(self, message, exception: Exception | None = None):
        super().__init__(message, exception)


class RecordFormatError(CustomException):
    """
    Trial record file could not be parsed
    """

    def __init__(
        self,
        message,
        path: str | None = None,
        line: int | None = None,
        row: int | None = None,
        exception: Exception | None = None,
    ):
        super().__init__(message, exception)
        self.path = path
        self.line = line
        self.row = row


class ExperimentAbortedError(CustomException):
    """
    Too many trials aborted for the experiment summary to be meaningful
    """

    def __init__(self, message, aborted: int = 0, trials: int = 0, exception: Exception | None = None):
        super().__init__(message, exception)
        self.aborted = aborted
        self.trials = trials
