"""
Flat evaluation tape: expressions are lowered once to straight-line Python
with shared subexpressions, then compiled with ``exec``.
"""

import math

import numpy as np

from expr import Add, Const, DomainError, Float, Func, Mul, Pow, Symbol
from expr.nodes import factor_expr

RADICAND_FLOOR = 1e-12


def _make_helpers(labels, radicand_floor):
    def rpow(x, num, den, label):
        if den % 2 == 0:
            if x < radicand_floor:
                raise DomainError(f"Radicand {x:.6g} below floor {radicand_floor:g}", labels[label])
            return x ** (num / den)
        if x < 0:
            magnitude = (-x) ** (num / den)
            return magnitude if num % 2 == 0 else -magnitude
        if x == 0 and num < 0:
            raise DomainError("Division by zero", labels[label])
        return x ** (num / den)

    def ipow(x, n, label):
        if x == 0 and n < 0:
            raise DomainError("Division by zero", labels[label])
        try:
            return x ** n
        except OverflowError:
            raise DomainError("Overflow in power", labels[label])

    def exp(x, label):
        try:
            return math.exp(x)
        except OverflowError:
            raise DomainError("Overflow in exp", labels[label])

    def log(x, label):
        if x <= 0:
            raise DomainError("Logarithm of a non-positive value", labels[label])
        return math.log(x)

    return {"_rpow": rpow, "_ipow": ipow, "_exp": exp, "_log": log, "_sin": math.sin, "_cos": math.cos,
            "_array": np.array, "_float": float}


class Tape:
    """Compiled evaluator of several expressions over an ordered list of input symbols."""

    def __init__(self, expressions, inputs, time=None, constants=None, radicand_floor=RADICAND_FLOOR):
        self.expressions = list(expressions)
        self.inputs = list(inputs)
        self.time = time
        self.constants = dict(constants or {})
        self._names = {}
        self._lines = []
        self._labels = []
        self._slots = {s: f"y[{i}]" for i, s in enumerate(self.inputs)}
        outputs = [self._emit(e) for e in self.expressions]
        body = "\n".join(f"    {line}" for line in self._lines)
        self.source = f"def _tape(t, y):\n{body}\n    return _array(({', '.join(outputs)}{',' if len(outputs) == 1 else ''}), dtype=_float)\n"
        if not outputs:
            self.source = "def _tape(t, y):\n    return _array((), dtype=_float)\n"
        namespace = _make_helpers(self._labels, radicand_floor)
        exec(compile(self.source, "<tape>", "exec"), namespace)
        self._fn = namespace["_tape"]

    @property
    def size(self):
        return len(self._lines)

    def __call__(self, t, y):
        try:
            return self._fn(t, y)
        except ZeroDivisionError:
            raise DomainError("Division by zero", "tape")

    def _label(self, text):
        self._labels.append(text)
        return len(self._labels) - 1

    def _temp(self, node, code):
        name = f"v{len(self._lines)}"
        self._lines.append(f"{name} = {code}")
        self._names[node] = name
        return name

    def _emit(self, node):
        if node in self._names:
            return self._names[node]
        if isinstance(node, (Const, Float)):
            return repr(float(node.value))
        if isinstance(node, Symbol):
            if node in self._slots:
                return self._slots[node]
            if self.time is not None and node == self.time:
                return "t"
            if node in self.constants:
                return repr(float(self.constants[node]))
            raise KeyError(node.name)
        if isinstance(node, Add):
            parts = [self._emit(t) for t in node.terms]
            return self._temp(node, " + ".join(parts))
        if isinstance(node, (Mul, Pow)):
            parts = [] if node.coeff == 1 else [repr(float(node.coeff))]
            for atom, e in node.factors:
                base = self._emit(atom)
                if e == 1:
                    parts.append(base)
                elif e.denominator == 1:
                    label = self._label(str(factor_expr(atom, e)))
                    parts.append(f"_ipow({base}, {e.numerator}, {label})")
                else:
                    label = self._label(str(atom))
                    parts.append(f"_rpow({base}, {e.numerator}, {e.denominator}, {label})")
            return self._temp(node, " * ".join(parts))
        if isinstance(node, Func):
            arg = self._emit(node.arg)
            if node.name in ("exp", "log"):
                label = self._label(str(node))
                return self._temp(node, f"_{node.name}({arg}, {label})")
            return self._temp(node, f"_{node.name}({arg})")
        raise TypeError(f"Cannot lower {type(node).__name__}")
