from expr.calculus import differentiate, polynomial_coefficients, simplify, substitute
from expr.equivalence import Equivalence, Verdict, equivalent
from expr.errors import DomainError, ExpressionError, ParseError, UnboundSymbolError, UnknownSymbolError
from expr.evaluate import evaluate, real_power
from expr.nodes import (
    HALF, MINUS_ONE, ONE, ZERO, Add, Const, Expression, Float, Func, Mul, Pow, Symbol, SymbolKind, add,
    as_expr, make_cos, make_exp, make_log, make_sin, mul, power, sqrt,
)
from expr.parser import FreeNames, jet_name, parse_expression, parse_number
from expr.printer import print_expression
