from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from app.engine.linalg import Matrix
from app.engine.numeric import Scalar, ScalarMode, format_scalar, mode_of


@dataclass
class CheckResult:
    name: str
    residual: Scalar
    passed: bool
    detail: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        data = {"name": self.name, "residual": format_scalar(self.residual), "passed": self.passed}
        if self.detail:
            data["detail"] = self.detail
        return data


@dataclass
class CheckReport:
    """Named residuals; exact mode passes only on exact zeros."""

    tol: float
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def add(self, name: str, residual: Scalar, detail: Optional[str] = None) -> CheckResult:
        if mode_of(residual) is ScalarMode.exact:
            passed = residual == 0
        else:
            passed = abs(residual) <= self.tol
        result = CheckResult(name, residual, passed, detail)
        self.checks.append(result)
        return result

    def add_matrix(self, name: str, m: Matrix, detail: Optional[str] = None) -> CheckResult:
        return self.add(name, m.max_abs(), detail)

    def add_flag(self, name: str, passed: bool, detail: Optional[str] = None) -> CheckResult:
        result = CheckResult(name, Fraction(0) if passed else Fraction(1), passed, detail)
        self.checks.append(result)
        return result

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checks.extend(other.checks)
        return self

    def to_json(self) -> Dict[str, Any]:
        return {"ok": self.ok, "tol": self.tol, "checks": [c.to_json() for c in self.checks]}
