class ExpressionError(Exception):
    """Base class for expression kernel failures"""


class ParseError(ExpressionError):
    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownSymbolError(ParseError):
    def __init__(self, name, position=None, source=None):
        self.name = name
        super().__init__(f"Unknown symbol '{name}'", position, source)


class UnboundSymbolError(ExpressionError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"Symbol '{symbol}' has no value in the binding")


class DomainError(ExpressionError):
    """Raised when a subexpression leaves the real domain (sqrt of a negative, log of a non-positive, 1/0)."""

    def __init__(self, message, subexpression=None):
        self.subexpression = subexpression
        if subexpression is not None:
            message = f"{message}: {subexpression}"
        super().__init__(message)
