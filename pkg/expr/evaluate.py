import math

from expr.errors import DomainError, UnboundSymbolError
from expr.nodes import Add, Const, Float, Func, Mul, Pow, Symbol, factor_expr


def real_power(base, exponent, describe=None):
    """``base ** exponent`` on the real branch; odd roots of negatives are allowed."""
    if exponent.denominator == 1:
        k = exponent.numerator
        if base == 0 and k < 0:
            raise DomainError("Division by zero", describe() if describe else None)
        try:
            return base ** k
        except OverflowError:
            raise DomainError("Overflow in power", describe() if describe else None)
    if base < 0:
        if exponent.denominator % 2 == 0:
            raise DomainError("Negative radicand", describe() if describe else None)
        magnitude = (-base) ** float(exponent)
        return magnitude if exponent.numerator % 2 == 0 else -magnitude
    if base == 0 and exponent < 0:
        raise DomainError("Division by zero", describe() if describe else None)
    return base ** float(exponent)


def _lookup(binding, symbol):
    if symbol in binding:
        return binding[symbol]
    if symbol.name in binding:
        return binding[symbol.name]
    raise UnboundSymbolError(symbol.name)


def evaluate(e, binding):
    """
    Numeric value of ``e`` under ``binding`` (Symbol or symbol name -> float).
    Raises UnboundSymbolError or DomainError naming the failing subexpression.
    """
    memo = {}

    def visit(node):
        if isinstance(node, (Const, Float)):
            return float(node.value)
        if isinstance(node, Symbol):
            return float(_lookup(binding, node))
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Add):
            value = math.fsum(visit(t) for t in node.terms)
        elif isinstance(node, (Mul, Pow)):
            value = float(node.coeff)
            for atom, x in node.factors:
                value *= real_power(visit(atom), x, lambda a=atom, x=x: str(factor_expr(a, x)))
        elif isinstance(node, Func):
            value = _apply(node, visit(node.arg))
        else:
            raise TypeError(f"Cannot evaluate {type(node).__name__}")
        memo[node] = value
        return value

    return visit(e)


def _apply(node, arg):
    if node.name == "exp":
        try:
            return math.exp(arg)
        except OverflowError:
            raise DomainError("Overflow in exp", str(node))
    if node.name == "log":
        if arg <= 0:
            raise DomainError("Logarithm of a non-positive value", str(node))
        return math.log(arg)
    if node.name == "sin":
        return math.sin(arg)
    return math.cos(arg)
