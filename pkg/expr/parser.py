"""
Precedence-climbing parser for the expression language (see GRAMMAR.md).

Symbols are resolved through a chart: any object with a
``lookup(name, order)`` method returning a Symbol or raising
UnknownSymbolError.  Without a chart every name becomes a free parameter
(or a jet of one, when it carries primes or an ``[n]`` suffix).
"""

import re
from collections import namedtuple
from fractions import Fraction

from expr.errors import ParseError, UnknownSymbolError
from expr.nodes import (
    FUNCTION_BUILDERS, Const, Float, Symbol, SymbolKind, add, apply_function, as_expr, mul, power,
)

# Groups of increasing binding power; every entry in a group shares its precedence.
OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left"), ("/", "left")],
    [("^", "right")],
]

OPERATOR_PREC = {name: idx for idx, group in enumerate(OPERATORS) for name, _ in group}
OPERATOR_ASSOC = {name: assoc for group in OPERATORS for name, assoc in group}
UNARY_PREC = OPERATOR_PREC["^"]

Token = namedtuple("Token", "kind text position")

TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<primes>'+)
  | (?P<op>\*\*|[-+*/^()\[\]])
    """,
    re.VERBOSE,
)


def tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        match = TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError(f"Unexpected character {source[pos]!r}", pos, source)
        kind = match.lastgroup
        text = match.group()
        if kind != "space":
            if text == "**":
                text = "^"
            tokens.append(Token(kind, text, pos))
        pos = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class FreeNames:
    """Resolver that accepts any name; used when no chart is given."""

    def __init__(self):
        self._symbols = {}

    def lookup(self, name, order=0):
        key = (name, order)
        if key not in self._symbols:
            if order == 0:
                self._symbols[key] = Symbol(name, SymbolKind.PARAMETER)
            else:
                self._symbols[key] = Symbol(jet_name(name, order), SymbolKind.JET, name, order)
        return self._symbols[key]


def jet_name(base, order):
    if order == 0:
        return base
    if order <= 3:
        return base + "'" * order
    return f"{base}[{order}]"


class _Parser:
    def __init__(self, source, chart):
        self.source = source
        self.chart = chart
        self.tokens = tokenize(source)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text):
        token = self.next()
        if token.text != text:
            raise ParseError(f"Expected {text!r} but found {token.text or 'end of input'!r}",
                             token.position, self.source)
        return token

    def parse(self):
        result = self.expression(0)
        token = self.peek()
        if token.kind != "end":
            raise ParseError(f"Unexpected token {token.text!r}", token.position, self.source)
        return result

    def expression(self, min_prec):
        lhs = self.unary()
        while True:
            token = self.peek()
            if token.kind != "op" or token.text not in OPERATOR_PREC:
                return lhs
            prec = OPERATOR_PREC[token.text]
            if prec < min_prec:
                return lhs
            self.next()
            next_prec = prec if OPERATOR_ASSOC[token.text] == "right" else prec + 1
            rhs = self.expression(next_prec)
            lhs = self.combine(token, lhs, rhs)

    def combine(self, token, lhs, rhs):
        op = token.text
        if op == "+":
            return add(lhs, rhs)
        if op == "-":
            return add(lhs, mul(-1, rhs))
        if op == "*":
            return mul(lhs, rhs)
        if op == "/":
            return mul(lhs, power(rhs, -1))
        if not isinstance(rhs, Const):
            raise ParseError(f"Exponent must simplify to a rational constant, got '{rhs}'",
                             token.position, self.source)
        return power(lhs, rhs.value)

    def unary(self):
        token = self.peek()
        if token.kind == "op" and token.text in "+-":
            self.next()
            operand = self.expression(UNARY_PREC)
            return operand if token.text == "+" else mul(-1, operand)
        return self.primary()

    def primary(self):
        token = self.next()
        if token.kind == "number":
            return Const(Fraction(token.text))
        if token.kind == "op" and token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if token.kind == "name":
            if self.peek().text == "(":
                if token.text not in FUNCTION_BUILDERS:
                    raise ParseError(f"Unknown function '{token.text}'", token.position, self.source)
                self.next()
                arg = self.expression(0)
                self.expect(")")
                return apply_function(token.text, arg)
            return self.symbol(token)
        if token.kind == "end":
            raise ParseError("Unexpected end of input", token.position, self.source)
        raise ParseError(f"Unexpected token {token.text!r}", token.position, self.source)

    def symbol(self, token):
        order = 0
        follow = self.peek()
        if follow.kind == "primes":
            self.next()
            order = len(follow.text)
        elif follow.text == "[":
            self.next()
            digits = self.next()
            if digits.kind != "number" or not digits.text.isdigit():
                raise ParseError("Expected a derivative order", digits.position, self.source)
            order = int(digits.text)
            self.expect("]")
        try:
            return self.chart.lookup(token.text, order)
        except UnknownSymbolError as e:
            raise UnknownSymbolError(e.name, token.position, self.source) from None


def parse_expression(source, chart=None):
    """Parse ``source`` into a canonical expression, resolving names through ``chart``."""
    if not isinstance(source, str):
        return as_expr(source)
    return _Parser(source, chart if chart is not None else FreeNames()).parse()


def parse_number(text):
    """Exact value of a numeric literal or constant expression such as ``1/3``."""
    value = parse_expression(text)
    if isinstance(value, (Const, Float)):
        return value.value
    raise ParseError(f"Expected a constant, got '{text}'")
