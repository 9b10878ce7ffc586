"""
Verification reports: one row per check, written as key = value text, a
``{"summary", "results"}`` JSON document or a CSV table.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

SYMBOLIC = "symbolic"
NUMERIC = "numeric"


@dataclass(frozen=True)
class CheckResult:
    name: str
    kind: str
    max_abs: float
    max_rel: float
    tolerance: float
    passed: bool
    anchor: str = ""
    detail: str = ""

    @classmethod
    def numeric(cls, name, deviation, tolerance, reference=None, anchor="", detail=""):
        """Pass iff max |deviation| <= tolerance; ``reference`` scales the relative residual."""
        deviation = np.abs(np.asarray(deviation, dtype=float))
        max_abs = float(deviation.max()) if deviation.size else 0.0
        if reference is not None and deviation.size:
            scale = np.maximum(np.abs(np.asarray(reference, dtype=float)), 1e-300)
            max_rel = float((deviation / scale).max())
        else:
            max_rel = max_abs
        passed = math.isfinite(max_abs) and max_abs <= tolerance
        return cls(name, NUMERIC, max_abs, max_rel, float(tolerance), passed, anchor, detail)

    @classmethod
    def symbolic(cls, name, outcome, anchor="", detail=""):
        """From an Equivalence: proved or sampled agreement passes, anything else fails."""
        residual = outcome.max_residual if outcome.verdict.value != "inconclusive" else math.inf
        detail = detail or outcome.verdict.value
        if outcome.witness:
            detail = f"{detail} at {outcome.witness}"
        return cls(name, SYMBOLIC, float(residual), float(residual), 0.0, outcome.holds, anchor, detail)

    @classmethod
    def failure(cls, name, kind, error, anchor=""):
        return cls(name, kind, math.inf, math.inf, 0.0, False, anchor, f"{type(error).__name__}: {error}")


@dataclass
class VerificationReport:
    model: str
    checks: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, check):
        self.checks.append(check)
        level = logging.INFO if check.passed else logging.WARNING
        logger.log(level, f"[{self.model}] {check.name}: {'PASS' if check.passed else 'FAIL'} "
                          f"(max abs {check.max_abs:.3g}, tol {check.tolerance:.3g}) {check.detail}")
        return check

    def extend(self, checks):
        for check in checks:
            self.add(check)

    def merge(self, other):
        """Combine two reports of the same model; checks are ordered by name, ties keep their order."""
        if other.model != self.model:
            raise ValueError(f"Cannot merge the report of '{other.model}' into '{self.model}'")
        merged = VerificationReport(self.model, sorted(self.checks + other.checks, key=lambda c: c.name),
                                    {**self.metadata, **other.metadata})
        return merged

    def sort(self):
        self.checks.sort(key=lambda c: c.name)
        return self

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def summary(self):
        return {
            "model": self.model,
            "total_checks": len(self.checks),
            "passed": len([c for c in self.checks if c.passed]),
            "failed": len(self.failures),
            "settings": self.metadata,
        }

    def to_frame(self):
        return pd.DataFrame([asdict(c) for c in self.checks],
                            columns=["name", "kind", "max_abs", "max_rel", "tolerance", "passed", "anchor", "detail"])

    def to_text(self):
        lines = [f"model = {self.model}"]
        for key, value in sorted(self.metadata.items()):
            lines.append(f"setting.{key} = {value}")
        for c in self.checks:
            lines.append(f"{c.name}.kind = {c.kind}")
            lines.append(f"{c.name}.max_abs = {c.max_abs:.6g}")
            lines.append(f"{c.name}.max_rel = {c.max_rel:.6g}")
            lines.append(f"{c.name}.tolerance = {c.tolerance:.6g}")
            lines.append(f"{c.name}.pass = {str(c.passed).lower()}")
            if c.anchor:
                lines.append(f"{c.name}.anchor = {c.anchor}")
            if c.detail:
                lines.append(f"{c.name}.detail = {c.detail}")
        lines.append(f"all_passed = {str(self.passed).lower()}")
        return "\n".join(lines) + "\n"

    def to_json(self, path=None):
        payload = {"summary": self.summary(), "results": [_jsonable(asdict(c)) for c in self.checks]}
        if path is None:
            return json.dumps(payload, indent=2, ensure_ascii=False, default=str)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, ensure_ascii=False, default=str)
        logger.info(f"Report saved to: {path}")
        return path

    def to_csv(self, path, float_format="%.17g"):
        self.to_frame().to_csv(path, index=False, float_format=float_format)
        logger.info(f"Report saved to: {path}")
        return path


def _jsonable(row):
    # JSON has no infinity
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in row.items()}
