"""Differentiation, substitution and simplification over canonical expressions."""

from expr.nodes import (
    Add, Const, Float, Func, Mul, Pow, Symbol, ZERO, add, apply_function, as_expr, factor_expr, make_cos,
    make_sin, mul, number, power,
)


def differentiate(e, s):
    """Partial derivative of ``e`` with respect to symbol ``s``."""
    e = as_expr(e)
    if s not in e.free_symbols:
        return ZERO
    return _diff(e, s, {})


def _diff(e, s, memo):
    if s not in e.free_symbols:
        return ZERO
    cached = memo.get(e)
    if cached is not None:
        return cached
    if isinstance(e, Symbol):
        result = as_expr(1) if e == s else ZERO
    elif isinstance(e, Add):
        result = add(*(_diff(t, s, memo) for t in e.terms))
    elif isinstance(e, (Mul, Pow)):
        result = _diff_product(e, s, memo)
    elif isinstance(e, Func):
        inner = _diff(e.arg, s, memo)
        if e.name == "exp":
            result = mul(e, inner)
        elif e.name == "log":
            result = mul(inner, power(e.arg, -1))
        elif e.name == "sin":
            result = mul(make_cos(e.arg), inner)
        else:
            result = mul(-1, make_sin(e.arg), inner)
    else:
        result = ZERO
    memo[e] = result
    return result


def _diff_product(e, s, memo):
    factors = e.factors
    parts = []
    for i, (atom, exponent) in enumerate(factors):
        if s not in atom.free_symbols:
            continue
        d_atom = _diff(atom, s, memo)
        if d_atom.is_zero:
            continue
        others = [factor_expr(a, x) for j, (a, x) in enumerate(factors) if j != i]
        if exponent == 1:
            parts.append(mul(number(e.coeff), d_atom, *others))
        else:
            parts.append(mul(number(e.coeff * exponent), power(atom, exponent - 1), d_atom, *others))
    return add(*parts)


def substitute(e, rules):
    """Simultaneous substitution of symbols by expressions, re-canonicalizing the result."""
    e = as_expr(e)
    rules = {k: as_expr(v) for k, v in rules.items()}
    if not rules:
        return e
    keys = frozenset(rules)
    memo = {}

    def visit(node):
        if keys.isdisjoint(node.free_symbols):
            return node
        cached = memo.get(node)
        if cached is not None:
            return cached
        if isinstance(node, Symbol):
            result = rules[node]
        else:
            result = _rebuild(node, visit)
        memo[node] = result
        return result

    return visit(e)


def simplify(e):
    """Rebuild ``e`` bottom-up through the canonical constructors."""
    memo = {}

    def visit(node):
        if isinstance(node, (Const, Float, Symbol)):
            return node
        cached = memo.get(node)
        if cached is None:
            cached = memo[node] = _rebuild(node, visit)
        return cached

    return visit(as_expr(e))


def _rebuild(node, visit):
    if isinstance(node, Add):
        return add(*(visit(t) for t in node.terms))
    if isinstance(node, (Mul, Pow)):
        return mul(number(node.coeff), *(power(visit(a), x) for a, x in node.factors))
    if isinstance(node, Func):
        return apply_function(node.name, visit(node.arg))
    return node


def polynomial_coefficients(e, s):
    """Split ``e`` as a polynomial in ``s``: returns {degree: coefficient}, or None when ``s`` enters non-polynomially."""
    e = as_expr(e)
    result = {}
    terms = e.terms if isinstance(e, Add) else (e,)
    for term in terms:
        degree = 0
        if s in term.free_symbols:
            if isinstance(term, Symbol):
                degree, rest = 1, as_expr(1)
            elif isinstance(term, (Mul, Pow)):
                rest_factors = []
                for atom, x in term.factors:
                    if atom == s and x.denominator == 1 and x > 0:
                        degree = int(x)
                    elif s in atom.free_symbols:
                        return None
                    else:
                        rest_factors.append(factor_expr(atom, x))
                rest = mul(number(term.coeff), *rest_factors)
            else:
                return None
        else:
            rest = term
        result[degree] = add(result.get(degree, ZERO), rest)
    return result
