"""
Inverting relations p = R(u) for u.

Handled shapes: R affine in u, or R = d + k*W^e where W is u itself or a sum
affine in u (quadratic Lagrangians and single rational powers such as
r^(3/4)*r'''^(1/2)).  Jointly affine systems go through Cramer's rule.
"""

from fractions import Fraction

from expr import ZERO, add, as_expr, mul, polynomial_coefficients, power, simplify, substitute
from expr.nodes import Add, Mul, Pow, factor_expr, number, terms_of
from mech.errors import MomentumInversionError, SingularSystemError


def invert(relation, unknown, value):
    """Solve ``value = relation`` for ``unknown``."""
    relation = as_expr(relation)
    value = as_expr(value)
    coeffs = polynomial_coefficients(relation, unknown)
    if coeffs is not None and set(coeffs) <= {0, 1}:
        slope = coeffs.get(1, ZERO)
        if slope.is_zero:
            raise MomentumInversionError(unknown.name, relation)
        return mul(add(value, mul(-1, coeffs.get(0, ZERO))), power(slope, -1))

    inner, exponent, scale, rest = _single_power(relation, unknown)
    if inner is None:
        raise MomentumInversionError(unknown.name, relation)
    solved_inner = power(mul(add(value, mul(-1, rest)), power(scale, -1)), Fraction(1) / exponent)
    if inner == unknown:
        return solved_inner
    return invert(inner, unknown, solved_inner)


def _single_power(relation, unknown):
    depends = [t for t in terms_of(relation) if unknown in t.free_symbols]
    if len(depends) != 1:
        return None, None, None, None
    term = depends[0]
    rest = add(*(t for t in terms_of(relation) if unknown not in t.free_symbols))
    if not isinstance(term, (Mul, Pow)):
        return None, None, None, None
    carrying = [(a, e) for a, e in term.factors if unknown in a.free_symbols]
    if len(carrying) != 1:
        return None, None, None, None
    atom, exponent = carrying[0]
    if not (atom == unknown or isinstance(atom, Add)):
        return None, None, None, None
    if isinstance(atom, Add):
        coeffs = polynomial_coefficients(atom, unknown)
        if coeffs is None or not set(coeffs) <= {0, 1}:
            return None, None, None, None
    scale = mul(number(term.coeff), *(factor_expr(a, e) for a, e in term.factors if (a, e) != (atom, exponent)))
    return atom, exponent, scale, rest


def determinant(matrix):
    n = len(matrix)
    if n == 0:
        return as_expr(1)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return add(mul(matrix[0][0], matrix[1][1]), mul(-1, matrix[0][1], matrix[1][0]))
    parts = []
    for j in range(n):
        if matrix[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        sign = 1 if j % 2 == 0 else -1
        parts.append(mul(sign, matrix[0][j], determinant(minor)))
    return add(*parts)


def solve_linear(matrix, rhs):
    """Solve matrix * x = rhs symbolically; diagonal systems divide directly, others use Cramer's rule."""
    n = len(matrix)
    diagonal = all(matrix[i][j].is_zero for i in range(n) for j in range(n) if i != j)
    if diagonal:
        solution = []
        for i in range(n):
            if matrix[i][i].is_zero:
                raise SingularSystemError(f"Zero pivot in row {i}")
            solution.append(mul(rhs[i], power(matrix[i][i], -1)))
        return solution
    det = simplify(determinant(matrix))
    if det.is_zero:
        raise SingularSystemError("Coefficient determinant vanishes identically")
    inverse_det = power(det, -1)
    solution = []
    for j in range(n):
        replaced = [row[:j] + [rhs[i]] + row[j + 1:] for i, row in enumerate(matrix)]
        solution.append(mul(determinant(replaced), inverse_det))
    return solution


def linear_split(expression, unknowns):
    """Coefficients and remainder of an expression affine in ``unknowns``; None when it is not affine."""
    expression = as_expr(expression)
    coefficients = []
    for u in unknowns:
        coeffs = polynomial_coefficients(expression, u)
        if coeffs is None or not set(coeffs) <= {0, 1}:
            return None
        slope = coeffs.get(1, ZERO)
        if any(v in slope.free_symbols for v in unknowns):
            return None
        coefficients.append(slope)
    remainder = substitute(expression, {u: ZERO for u in unknowns})
    return coefficients, remainder


def invert_system(relations):
    """Solve several ``value = relation(unknown)`` rows at once; rows: (relation, unknown, value)."""
    unknowns = [u for _, u, _ in relations]
    decoupled = all(
        not (set(unknowns) - {u}) & relation.free_symbols for relation, u, _ in relations
    )
    if decoupled:
        return {u: invert(relation, u, value) for relation, u, value in relations}
    matrix = []
    rhs = []
    for relation, u, value in relations:
        split = linear_split(relation, unknowns)
        if split is None:
            raise MomentumInversionError(u.name, relation)
        coefficients, remainder = split
        matrix.append(coefficients)
        rhs.append(add(value, mul(-1, remainder)))
    return dict(zip(unknowns, solve_linear(matrix, rhs)))
