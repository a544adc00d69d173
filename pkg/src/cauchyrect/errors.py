"""Exception hierarchy shared by all modules."""


class CauchyRectError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(CauchyRectError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprLimitError(CauchyRectError, ValueError):
    """Expression exceeds the depth or exponent limits."""


class EvaluationError(CauchyRectError, ArithmeticError):
    """Division by zero, log of zero, overflow or a non-finite result."""


class RootFindingError(CauchyRectError, RuntimeError):
    pass


class QuadratureError(CauchyRectError, RuntimeError):
    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class PoleOnContourError(CauchyRectError, ValueError):
    pass


class ResidueError(CauchyRectError, RuntimeError):
    pass


class HypothesisError(CauchyRectError, ValueError):
    """A half-plane theorem was applied without its hypotheses holding."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ParameterError(CauchyRectError, ValueError):
    pass


class BoundSearchError(CauchyRectError, RuntimeError):
    """No truncation rectangle certifies the requested accuracy."""
