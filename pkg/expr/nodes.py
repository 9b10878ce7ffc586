"""
Immutable expression nodes and the canonical-form arithmetic behind them.

Every constructor here returns an expression in canonical form: a sum of
monomials, each monomial a rational (or float) coefficient times a sorted
product of atoms raised to rational powers.  Atoms are symbols, function
applications, prime radicals (2^(1/2)) and multi-term sums that could not be
expanded (negative or fractional powers of sums, after their monomial and
rational content has been pulled out).
"""

import math
from enum import Enum
from fractions import Fraction
from functools import reduce

from expr.errors import DomainError

ZERO_Q = Fraction(0)
ONE_Q = Fraction(1)

FUNCTIONS = ("exp", "log", "sin", "cos")


class SymbolKind(str, Enum):
    COORDINATE = "coordinate"
    JET = "jet"
    MOMENTUM = "momentum"
    ACTION = "action"
    PARAMETER = "parameter"
    TIME = "time"
    AUXILIARY = "auxiliary"


class Expression:
    __slots__ = ("_key", "_hash", "_free")

    def _set_key(self, key):
        self._key = key
        self._hash = hash(key)
        self._free = None

    @property
    def key(self):
        return self._key

    @property
    def free_symbols(self):
        if self._free is None:
            self._free = self._collect_symbols()
        return self._free

    def _collect_symbols(self):
        return frozenset()

    @property
    def is_zero(self):
        return isinstance(self, Const) and self.value == 0

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, (int, Fraction, float)):
            other = as_expr(other)
        if not isinstance(other, Expression):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __lt__(self, other):
        return self._key < other._key

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, mul(MINUS_ONE, other))

    def __rsub__(self, other):
        return add(other, mul(MINUS_ONE, self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(other, -1))

    def __rtruediv__(self, other):
        return mul(other, power(self, -1))

    def __neg__(self):
        return mul(MINUS_ONE, self)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if isinstance(exponent, Const):
            exponent = exponent.value
        if not isinstance(exponent, (int, Fraction)):
            raise TypeError(f"Exponent must be rational, got {exponent!r}")
        return power(self, exponent)

    def __str__(self):
        from expr.printer import print_expression

        return print_expression(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class Const(Expression):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._set_key((0, self.value))


class Float(Expression):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = float(value)
        self._set_key((1, self.value))


class Symbol(Expression):
    __slots__ = ("name", "kind", "base", "order")

    def __init__(self, name, kind=SymbolKind.PARAMETER, base=None, order=0):
        self.name = name
        self.kind = SymbolKind(kind)
        self.base = base
        self.order = order
        self._set_key((2, base or name, order, self.kind.value, name))

    def _collect_symbols(self):
        return frozenset((self,))


class Func(Expression):
    __slots__ = ("name", "arg")

    def __init__(self, name, arg):
        self.name = name
        self.arg = arg
        self._set_key((3, name, arg._key))

    def _collect_symbols(self):
        return self.arg.free_symbols


class Add(Expression):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms
        self._set_key((4, tuple(t._key for t in terms)))

    def _collect_symbols(self):
        return frozenset().union(*(t.free_symbols for t in self.terms))


class Pow(Expression):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        self.base = base
        self.exp = exp
        self._set_key((5, base._key, exp))

    @property
    def factors(self):
        return ((self.base, self.exp),)

    @property
    def coeff(self):
        return ONE_Q

    def _collect_symbols(self):
        return self.base.free_symbols


class Mul(Expression):
    __slots__ = ("coeff", "factors")

    def __init__(self, coeff, factors):
        self.coeff = coeff
        self.factors = factors
        self._set_key((6, tuple((a._key, e) for a, e in factors), coeff))

    def _collect_symbols(self):
        return frozenset().union(*(a.free_symbols for a, _ in self.factors))


ZERO = Const(0)
ONE = Const(1)
MINUS_ONE = Const(-1)
HALF = Const(Fraction(1, 2))


def as_expr(value):
    if isinstance(value, Expression):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not expressions")
    if isinstance(value, (int, Fraction)):
        return Const(value)
    if isinstance(value, float):
        return Float(value)
    raise TypeError(f"Cannot convert {value!r} to an expression")


def number(value):
    if isinstance(value, float):
        return Float(value)
    return Const(value)


def is_exp(atom):
    return isinstance(atom, Func) and atom.name == "exp"


def coefficient_of(term):
    """Numeric coefficient of a single (non-sum) term."""
    if isinstance(term, (Const, Float)):
        return term.value
    if isinstance(term, Mul):
        return term.coeff
    return ONE_Q


def terms_of(e):
    return e.terms if isinstance(e, Add) else (() if e.is_zero else (e,))


def factor_expr(atom, exponent):
    return _make_term(((atom, Fraction(exponent)),), ONE_Q)


# ---------------------------------------------------------------------------
# polynomial view


def _term_items(e):
    if isinstance(e, (Const, Float)):
        return [((), e.value)] if e.value != 0 else []
    if isinstance(e, (Mul, Pow)):
        return [(e.factors, e.coeff)]
    return [(((e, ONE_Q),), ONE_Q)]


def _poly(e):
    if isinstance(e, Add):
        result = {}
        for t in e.terms:
            for mono, c in _term_items(t):
                result[mono] = c
        return result
    return dict(_term_items(e))


def _accumulate(result, mono, c):
    total = result.get(mono, 0) + c
    if total == 0:
        result.pop(mono, None)
    else:
        result[mono] = total


def _make_term(mono, c):
    if not mono:
        return number(c)
    if c == 1 and len(mono) == 1:
        atom, e = mono[0]
        return atom if e == 1 else Pow(atom, e)
    return Mul(c, mono)


def _from_poly(poly):
    terms = [_make_term(mono, c) for mono, c in poly.items() if c != 0]
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    terms.sort(key=lambda t: t._key)
    return Add(tuple(terms))


def _sorted_mono(exps):
    return tuple(sorted(exps, key=lambda f: f[0]._key))


def _normalize(exps):
    """Turn an atom->exponent map into a canonical poly (usually one term)."""
    coeff = ONE_Q
    factors = []
    exp_atoms = []
    extra = []
    for atom, e in exps.items():
        if e == 0:
            continue
        if is_exp(atom):
            exp_atoms.append((atom, e))
            continue
        if isinstance(atom, Const):
            whole = math.floor(e)
            if whole:
                coeff *= atom.value ** whole
                e -= whole
            if e == 0:
                continue
        elif isinstance(atom, Add) and e > 0 and e.denominator == 1:
            extra.append(_pow_poly(_poly(atom), int(e)))
            continue
        factors.append((atom, e))
    if len(exp_atoms) == 1 and exp_atoms[0][1] == 1:
        factors.append(exp_atoms[0])
    elif exp_atoms:
        combined = make_exp(add(*(mul(a.arg, Const(e)) for a, e in exp_atoms)))
        extra.append(_poly(combined))
    result = {_sorted_mono(factors): coeff}
    for p in extra:
        result = _mul_poly(result, p)
    return result


def _mul_mono(ma, mb):
    exps = dict(ma)
    for atom, e in mb:
        exps[atom] = exps.get(atom, ZERO_Q) + e
    return _normalize(exps)


def _mul_poly(a, b):
    result = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            c = ca * cb
            if not ma:
                _accumulate(result, mb, c)
            elif not mb:
                _accumulate(result, ma, c)
            else:
                for m, k in _mul_mono(ma, mb).items():
                    _accumulate(result, m, c * k)
    return result


def _pow_poly(p, k):
    result = {(): ONE_Q}
    base = p
    while k:
        if k & 1:
            result = _mul_poly(result, base)
        k >>= 1
        if k:
            base = _mul_poly(base, base)
    return result


def _factorize(n):
    """Prime factorization by trial division; a large leftover cofactor is kept as one factor."""
    factors = []
    p = 2
    while p * p <= n and p < 100000:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        if k:
            factors.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def _pow_number(c, n):
    if n.denominator == 1:
        k = n.numerator
        if c == 0 and k < 0:
            raise DomainError("Division by zero", "0")
        return {(): c ** k}
    if isinstance(c, float):
        if c < 0:
            raise DomainError("Fractional power of a negative number", repr(c))
        return {(): c ** float(n)}
    if c == 0:
        if n < 0:
            raise DomainError("Division by zero", "0")
        return {}
    sign = ONE_Q
    if c < 0:
        if n.denominator % 2 == 0:
            return _normalize({Const(c): n})
        # odd root of a negative number: real branch
        sign = ONE_Q if n.numerator % 2 == 0 else -ONE_Q
        c = -c
    exps = {}
    for p, k in _factorize(c.numerator):
        atom = Const(p)
        exps[atom] = exps.get(atom, ZERO_Q) + k * n
    for p, k in _factorize(c.denominator):
        atom = Const(p)
        exps[atom] = exps.get(atom, ZERO_Q) - k * n
    result = _normalize(exps)
    if sign != 1:
        result = {m: -v for m, v in result.items()}
    return result


def _pow_term(mono, c, n):
    coeff_poly = _pow_number(c, n)
    if not mono or not coeff_poly:
        return coeff_poly
    exps = {}
    for atom, e in mono:
        exps[atom] = exps.get(atom, ZERO_Q) + e * n
    return _mul_poly(coeff_poly, _normalize(exps))


def _exponent_in(mono, atom):
    for a, e in mono:
        if a == atom:
            return e
    return None


def _pow_sum(p, n):
    """Raise a multi-term sum to a negative or fractional power, pulling out its content first."""
    monos = list(p)
    common = {}
    for atom, _ in monos[0]:
        if isinstance(atom, Const):
            continue
        exps = [_exponent_in(m, atom) for m in monos]
        if any(e is None for e in exps):
            continue
        common[atom] = ONE_Q if is_exp(atom) else min(exps)

    coeffs = list(p.values())
    content = ONE_Q
    if all(isinstance(c, Fraction) for c in coeffs):
        num = reduce(math.gcd, (abs(c.numerator) for c in coeffs))
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs))
        content = Fraction(num, den)

    inner = {}
    for mono, c in p.items():
        exps = dict(mono)
        for atom, e in common.items():
            exps[atom] -= e
        for m, k in _normalize(exps).items():
            _accumulate(inner, m, c * k / content)
    inner_expr = _from_poly(inner)

    if n.denominator == 1 and isinstance(inner_expr, Add) and coefficient_of(inner_expr.terms[0]) < 0:
        content = -content
        inner_expr = _from_poly({m: -c for m, c in inner.items()})

    result = _pow_number(content, n)
    if common:
        result = _mul_poly(result, _normalize({atom: e * n for atom, e in common.items()}))
    if isinstance(inner_expr, Add):
        return _mul_poly(result, {((inner_expr, n),): ONE_Q})
    return _mul_poly(result, _poly(power(inner_expr, n)))


# ---------------------------------------------------------------------------
# public constructors


def add(*args):
    if len(args) == 1:
        return as_expr(args[0])
    result = {}
    for a in args:
        for mono, c in _poly(as_expr(a)).items():
            _accumulate(result, mono, c)
    return _from_poly(result)


def mul(*args):
    if len(args) == 1:
        return as_expr(args[0])
    acc = {(): ONE_Q}
    for a in args:
        p = _poly(as_expr(a))
        if not p:
            return ZERO
        acc = _mul_poly(acc, p)
    return _from_poly(acc)


def power(base, exponent):
    base = as_expr(base)
    n = Fraction(exponent)
    if n == 0:
        return ONE
    if n == 1:
        return base
    p = _poly(base)
    if not p:
        if n < 0:
            raise DomainError("Division by zero", "0")
        return ZERO
    if len(p) == 1:
        (mono, c), = p.items()
        return _from_poly(_pow_term(mono, c, n))
    if n > 0 and n.denominator == 1:
        return _from_poly(_pow_poly(p, n.numerator))
    return _from_poly(_pow_sum(p, n))


def sqrt(arg):
    return power(arg, Fraction(1, 2))


def make_exp(arg):
    arg = as_expr(arg)
    p = _poly(arg)
    if not p:
        return ONE
    if list(p) == [()] and isinstance(p[()], float):
        try:
            return Float(math.exp(p[()]))
        except OverflowError:
            raise DomainError("Overflow in exp", f"exp({p[()]!r})")
    pulled = []
    rest = {}
    for mono, c in p.items():
        if (len(mono) == 1 and mono[0][1] == 1 and isinstance(mono[0][0], Func)
                and mono[0][0].name == "log" and isinstance(c, Fraction)):
            pulled.append(power(mono[0][0].arg, c))
        else:
            rest[mono] = c
    out = Func("exp", _from_poly(rest)) if rest else ONE
    return mul(out, *pulled) if pulled else out


def make_log(arg):
    arg = as_expr(arg)
    p = _poly(arg)
    if not p:
        raise DomainError("Logarithm of zero", "log(0)")
    if len(p) == 1:
        (mono, c), = p.items()
        if not mono:
            if c <= 0:
                raise DomainError("Logarithm of a non-positive number", f"log({arg})")
            if isinstance(c, float):
                return Float(math.log(c))
            return ZERO if c == 1 else Func("log", Const(c))
        if isinstance(c, Fraction) and c > 0:
            parts = [] if c == 1 else [Func("log", Const(c))]
            for atom, e in mono:
                if is_exp(atom):
                    parts.append(mul(atom.arg, Const(e)))
                else:
                    parts.append(mul(Const(e), Func("log", atom)))
            return add(*parts)
    return Func("log", arg)


def make_sin(arg):
    arg = as_expr(arg)
    if arg.is_zero:
        return ZERO
    if isinstance(arg, Float):
        return Float(math.sin(arg.value))
    return Func("sin", arg)


def make_cos(arg):
    arg = as_expr(arg)
    if arg.is_zero:
        return ONE
    if isinstance(arg, Float):
        return Float(math.cos(arg.value))
    return Func("cos", arg)


FUNCTION_BUILDERS = {
    "exp": make_exp,
    "log": make_log,
    "sin": make_sin,
    "cos": make_cos,
    "sqrt": sqrt,
}


def apply_function(name, arg):
    return FUNCTION_BUILDERS[name](arg)
