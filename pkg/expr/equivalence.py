import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from expr.calculus import simplify
from expr.errors import DomainError
from expr.evaluate import evaluate
from expr.nodes import as_expr

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 16
DEFAULT_LOW = 0.1
DEFAULT_HIGH = 2.0
DEFAULT_RTOL = 1e-9


class Verdict(str, Enum):
    PROVED_EQUAL = "proved-equal"
    NUMERICALLY_EQUAL = "numerically-equal"
    PROVED_DIFFERENT = "proved-different"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Equivalence:
    verdict: Verdict
    samples: int = 0
    max_residual: float = 0.0
    witness: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.verdict in (Verdict.PROVED_EQUAL, Verdict.NUMERICALLY_EQUAL)

    def __bool__(self):
        return self.holds


def equivalent(a, b, samples=DEFAULT_SAMPLES, low=DEFAULT_LOW, high=DEFAULT_HIGH, rtol=DEFAULT_RTOL,
               seed=0, max_attempts=None):
    """
    Decide whether ``a`` and ``b`` agree.  Exact when the canonical difference is zero,
    otherwise by sampling random positive bindings; samples that leave the real
    domain are redrawn.  An inconclusive verdict does not hold.
    """
    a, b = as_expr(a), as_expr(b)
    if simplify(a - b).is_zero:
        return Equivalence(Verdict.PROVED_EQUAL)

    symbols = sorted(a.free_symbols | b.free_symbols, key=lambda s: s.key)
    rng = np.random.default_rng(seed)
    max_attempts = max_attempts or samples * 8
    accepted = 0
    worst = 0.0
    for _ in range(max_attempts):
        values = rng.uniform(low, high, size=len(symbols))
        binding = dict(zip(symbols, values.tolist()))
        try:
            va = evaluate(a, binding)
            vb = evaluate(b, binding)
        except DomainError:
            continue
        residual = abs(va - vb)
        if not np.isfinite(residual):
            continue
        worst = max(worst, residual)
        if residual > rtol * (1.0 + abs(va)):
            witness = {s.name: v for s, v in binding.items()}
            logger.debug(f"Expressions differ: residual {residual:.3g} at {witness}")
            return Equivalence(Verdict.PROVED_DIFFERENT, accepted + 1, residual, witness)
        accepted += 1
        if accepted >= samples:
            return Equivalence(Verdict.NUMERICALLY_EQUAL, accepted, worst)
    logger.warning(f"Equivalence inconclusive: only {accepted} of {samples} samples stayed in the real domain")
    return Equivalence(Verdict.INCONCLUSIVE, accepted, worst)
