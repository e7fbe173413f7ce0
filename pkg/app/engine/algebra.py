"""Structure data (G, f, s) of a deformed three-generator algebra and the
structure function Phi(eta, m).

Relations: J0 J+ = J+ G(J0), J- J0 = G(J0) J-, J- J+ = s J+ J- + f(J0).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from app.core.errors import ValidationError
from app.engine.exppoly import ExpPoly
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    join_modes,
    mode_of,
    parse_scalar,
    promote,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    s: Scalar
    G: ExpPoly
    f: ExpPoly
    params: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def mode(self) -> ScalarMode:
        return join_modes(mode_of(self.s), self.G.mode, self.f.mode)

    def promote(self, mode: ScalarMode) -> "AlgebraSpec":
        return AlgebraSpec(
            name=self.name,
            s=promote(self.s, mode),
            G=self.G.promote(mode),
            f=self.f.promote(mode),
            params=dict(self.params),
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "mode": self.mode.value,
            "s": format_scalar(self.s),
            "G": self.G.to_json(),
            "f": self.f.to_json(),
            "params": {k: _format_param(v) for k, v in sorted(self.params.items())},
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "AlgebraSpec":
        spec = cls(
            name=data.get("name", "custom"),
            s=parse_scalar(data["s"]),
            G=ExpPoly.from_json(data["G"]),
            f=ExpPoly.from_json(data["f"]),
            params={k: _parse_param(v) for k, v in data.get("params", {}).items()},
        )
        mode = data.get("mode")
        return spec.promote(ScalarMode(mode)) if mode else spec


def _format_param(value: Any) -> Any:
    if isinstance(value, ExpPoly):
        return value.to_json()
    return format_scalar(value)


def _parse_param(value: Any) -> Any:
    if isinstance(value, dict):
        return ExpPoly.from_json(value)
    return parse_scalar(value)


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> Dict[str, Any]:
        return {"ok": self.ok, "violations": list(self.violations)}


def validate(spec: AlgebraSpec) -> ValidationReport:
    report = ValidationReport()
    if spec.s == 0:
        report.violations.append("s must be nonzero")
    if not spec.G.is_polynomial:
        report.violations.append("G must be a pure polynomial")
    elif spec.G.degree < 1:
        report.violations.append("G must have degree >= 1")
    if not spec.f.is_polynomial and not (spec.G.is_polynomial and spec.G.degree == 1):
        report.violations.append(
            "exponential f needs an affine G; otherwise Phi leaves the exponential polynomials"
        )
    return report


def ensure_valid(spec: AlgebraSpec) -> AlgebraSpec:
    report = validate(spec)
    if not report.ok:
        raise ValidationError(report)
    return spec


def iterate_G(spec: AlgebraSpec, m: int) -> ExpPoly:
    """G^[m] = G o ... o G (m times); G^[0] is the identity z."""
    if m < 0:
        raise ValueError("m must be a natural number")
    out = ExpPoly.identity()
    for _ in range(m):
        out = spec.G.compose(out)
    return out


def weights(spec: AlgebraSpec, eta: Scalar, n: int) -> List[Scalar]:
    """G^[m](eta) for m = 0..n-1."""
    out: List[Scalar] = []
    w = eta
    for _ in range(n):
        out.append(w)
        w = spec.G.evaluate(w)
    return out


def phi_values(spec: AlgebraSpec, eta: Scalar, n: int) -> List[Scalar]:
    """Phi(eta, m) for m = 0..n, by Phi(m+1) = f(G^[m](eta)) + s Phi(m)."""
    values: List[Scalar] = [Fraction(0) if mode_of(eta) is ScalarMode.exact else 0.0]
    w = eta
    for _ in range(n):
        values.append(spec.f.evaluate(w) + spec.s * values[-1])
        w = spec.G.evaluate(w)
    return values


def phi_numeric(spec: AlgebraSpec, eta: Scalar, m: int) -> Scalar:
    if m < 0:
        raise ValueError("m must be a natural number")
    return phi_values(spec, eta, m)[m]


def phi_symbolic(spec: AlgebraSpec, m: int, upto: Optional[List[ExpPoly]] = None) -> ExpPoly:
    """Phi(eta, m) as an ExpPoly in eta.

    When ``upto`` is given it receives Phi(eta, 0..m) in order.
    """
    if m < 0:
        raise ValueError("m must be a natural number")
    phi = ExpPoly.zero()
    g_iter = ExpPoly.identity()
    if upto is not None:
        upto.append(phi)
    for _ in range(m):
        phi = spec.f.compose(g_iter) + phi.scale(spec.s)
        g_iter = spec.G.compose(g_iter)
        if upto is not None:
            upto.append(phi)
    return phi
