"""Exception types shared across the package."""


class TensorankError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TensorankError, ValueError):
    """Invalid input data, configuration, or arguments."""


class NumericError(TensorankError, ArithmeticError):
    """A numeric routine produced a non-finite intermediate value.

    ``context`` identifies the offending fiber or cell when known,
    e.g. ``("Belgium", "inflation", 3)``.
    """

    def __init__(self, message, context=None):
        if context is not None:
            message = f"{message} [context: {context}]"
        super().__init__(message)
        self.context = context
