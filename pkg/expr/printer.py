"""Text form of expressions; the output parses back to an equal expression."""

from fractions import Fraction

from expr.nodes import Add, Const, Float, Func, Mul, Pow, Symbol


def print_expression(e):
    if isinstance(e, Const):
        return _rational(e.value)
    if isinstance(e, Float):
        return repr(e.value)
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({print_expression(e.arg)})"
    if isinstance(e, (Mul, Pow)):
        return _term(e.coeff, e.factors)
    if isinstance(e, Add):
        return _sum(e.terms)
    raise TypeError(f"Cannot print {type(e).__name__}")


def _rational(value):
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _sum(terms):
    # constant term goes last
    ordered = [t for t in terms if not isinstance(t, (Const, Float))]
    ordered += [t for t in terms if isinstance(t, (Const, Float))]
    out = print_expression(ordered[0])
    for t in ordered[1:]:
        text = print_expression(t)
        if text.startswith("-"):
            out += " - " + text[1:]
        else:
            out += " + " + text
    return out


def _base(atom):
    # signed, fractional and float bases bind looser than ^
    if isinstance(atom, Const):
        if atom.value < 0 or atom.value.denominator != 1:
            return f"({print_expression(atom)})"
    elif isinstance(atom, (Add, Mul, Pow, Float)):
        return f"({print_expression(atom)})"
    return print_expression(atom)


def _power(atom, exponent):
    if exponent == 1:
        return _base(atom)
    if exponent.denominator == 1:
        return f"{_base(atom)}^{exponent.numerator}"
    return f"{_base(atom)}^({exponent.numerator}/{exponent.denominator})"


def _term(coeff, factors):
    numerator = [_power(a, e) for a, e in factors if e > 0]
    denominator = [_power(a, -e) for a, e in factors if e < 0]
    sign = "-" if coeff < 0 else ""
    magnitude = abs(coeff)
    if isinstance(magnitude, Fraction):
        if magnitude.numerator != 1 or not numerator:
            numerator.insert(0, str(magnitude.numerator))
        if magnitude.denominator != 1:
            denominator.insert(0, str(magnitude.denominator))
    else:
        numerator.insert(0, repr(magnitude))
    text = "*".join(numerator)
    if len(denominator) == 1:
        text += "/" + denominator[0]
    elif denominator:
        text += "/(" + "*".join(denominator) + ")"
    return sign + text
