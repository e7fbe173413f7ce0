"""Preset algebras (G, f, s) and the tabulated closed forms of Phi(eta, m)."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from app.core.errors import (
    ClosureError,
    InvalidParamError,
    MissingParamError,
    UnknownPresetError,
)
from app.engine.algebra import AlgebraSpec, ensure_valid, iterate_G, phi_symbolic
from app.engine.exppoly import ExpPoly, q_number, q_scalar
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    mode_of,
    parse_scalar,
    promote,
)

logger = logging.getLogger(__name__)

Z = ExpPoly.identity()


class TableConvention(str, Enum):
    matches_defphi = "matches_defphi"
    global_minus = "global_minus"
    rescaled = "rescaled"


Params = Dict[str, Any]


@dataclass(frozen=True)
class Preset:
    key: str
    title: str
    required: Tuple[str, ...]
    builder: Callable[[Params], Tuple[ExpPoly, ExpPoly, Scalar]]
    table_phi: Optional[Callable[[AlgebraSpec, Params, int], ExpPoly]] = None
    convention: TableConvention = TableConvention.matches_defphi
    # Phi_defphi = factor * Phi_table, for rescaled rows
    table_factor: Optional[Callable[[Params], Scalar]] = None
    table_float_only: bool = False
    provenance: str = ""
    param_kinds: Mapping[str, str] = field(default_factory=dict)

    def describe(self) -> Dict[str, Any]:
        return {
            "key": self.key,
            "title": self.title,
            "params": [
                {"name": name, "kind": self.param_kinds.get(name, "scalar")} for name in self.required
            ],
            "table_phi": self.table_phi is not None,
            "convention": self.convention.value,
            "provenance": self.provenance,
        }


# -- parameters -----------------------------------------------------------


def _q(params: Params) -> Scalar:
    q = params["q"]
    if mode_of(q) is ScalarMode.complex or q <= 0 or q == 1:
        raise InvalidParamError("q must be a positive number other than 1")
    return q


def _natural(params: Params, name: str) -> int:
    value = params[name]
    if mode_of(value) is not ScalarMode.exact or Fraction(value).denominator != 1 or value < 1:
        raise InvalidParamError(f"{name} must be a positive integer")
    return int(value)


def _polynomial(params: Params, name: str) -> ExpPoly:
    value = params[name]
    if not isinstance(value, ExpPoly):
        value = ExpPoly.constant(value)
    if not value.is_polynomial:
        raise InvalidParamError(f"{name} must be a polynomial")
    return value


def parse_param(value: Any) -> Any:
    """A parameter value from CLI/JSON: ExpPoly JSON, "c0,c1,..." coefficients or a scalar."""
    if isinstance(value, ExpPoly):
        return value
    if isinstance(value, dict):
        return ExpPoly.from_json(value)
    if isinstance(value, str) and "," in value:
        return ExpPoly.polynomial([parse_scalar(c) for c in value.split(",")])
    return parse_scalar(value)


# -- builders: each returns (G, f, s) ----------------------------------------


def _uq_su2(p: Params):
    return Z + 1, -q_number(_q(p)), Fraction(1)


def _uq_su11(p: Params):
    return Z + 1, q_number(_q(p)), Fraction(1)


def _uq_osp12(p: Params):
    return Z + Fraction(1, 2), q_number(_q(p)).scale(Fraction(-1, 4)), Fraction(-1)


def _a21(p: Params):
    q = _q(p)
    return Z.scale(q) - 1, ExpPoly.polynomial([0, 2, 2 * (1 - q)]), Fraction(1)


def _a31_plus(p: Params):
    q = _q(p)
    return Z.scale(q) - 1, ExpPoly.polynomial([0, 2, 0, -2 * (1 - q) ** 2]), Fraction(1)


def _def_osp12(p: Params):
    return Z + 1, _polynomial(p, "f"), Fraction(-1)


def _w3_2(p: Params):
    return Z + 2, -(Z * Z + p["c"]), Fraction(1)


def _def_su2(p: Params):
    phi = _polynomial(p, "phi")
    return Z + 1, phi.compose_poly(Z * (Z - 1)) - phi.compose_poly(Z * (Z + 1)), Fraction(1)


def _poly_sl2(p: Params):
    n = _natural(p, "n")
    return Z + 1, Z ** n - (Z + 1) ** n, Fraction(1)


# -- tabulated Phi(eta, m) ----------------------------------------------------


def _table_uq_su2(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # [m] [-2 eta - m + 1]
    q = spec.params["q"]
    return q_number(q, -2, 1 - m).scale(q_scalar(q, m))


def _table_uq_su11(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # [m] [2 eta + m - 1]
    q = spec.params["q"]
    return q_number(q, 2, m - 1).scale(q_scalar(q, m))


def _table_uq_osp12(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # q^(1/2) / (4 (1 + q)) ((-1)^m [2 eta - 1/2] - [2 eta + m - 1/2])
    q = float(spec.params["q"])
    half = 0.5
    prefactor = q ** half / (4 * (1 + q))
    return (q_number(q, 2.0, -half).scale((-1) ** m) - q_number(q, 2.0, m - half)).scale(prefactor)


def _table_a21(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # (1 - q^(2m)) (eta + 1/(1-q)) (eta - (q + ... + q^(m-1)) / (1 + q^m))
    q = spec.params["q"]
    partial = sum((q ** k for k in range(1, m)), Fraction(0))
    return (Z + 1 / (1 - q)) * (Z - partial / (1 + q ** m)) * (1 - q ** (2 * m))


def _factor_a21(p: Params) -> Scalar:
    return 2 / (1 + p["q"])


def _table_a31_plus(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # rho(eta) - rho(G^[m](eta)), with rho from the consistency equation
    from app.engine.casimir import solve_rho

    rho = solve_rho(spec).rho
    return rho - rho.compose(iterate_G(spec, m))


def _table_w3_2(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # -m eta^2 - 2m(m-1) eta - m (4/3 m^2 - 2m + c + 2/3)
    c = spec.params["c"]
    constant = -m * (Fraction(4, 3) * m * m - 2 * m + c + Fraction(2, 3))
    return ExpPoly.polynomial([constant, -2 * m * (m - 1), -m])


def _table_def_su2(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # phi((eta+m)(eta+m-1)) - phi(eta(eta-1))
    phi = _polynomial(spec.params, "phi")
    return phi.compose_poly((Z + m) * (Z + (m - 1))) - phi.compose_poly(Z * (Z - 1))


def _table_poly_sl2(spec: AlgebraSpec, p: Params, m: int) -> ExpPoly:
    # (eta + m)^n - eta^n
    n = _natural(spec.params, "n")
    return (Z + m) ** n - Z ** n


PRESETS: Dict[str, Preset] = {
    preset.key: preset
    for preset in [
        Preset(
            "uq_su2",
            "U_q(su(2))",
            ("q",),
            _uq_su2,
            _table_uq_su2,
            provenance="G=z+1, s=1, f=-[2z]; Phi=[m][-2eta-m+1]",
        ),
        Preset(
            "uq_su11",
            "U_q(su(1,1))",
            ("q",),
            _uq_su11,
            _table_uq_su11,
            provenance="G=z+1, s=1, f=[2z]; Phi=[m][2eta+m-1]",
        ),
        Preset(
            "uq_osp12",
            "U_q(osp(1|2))",
            ("q",),
            _uq_osp12,
            _table_uq_osp12,
            table_float_only=True,
            provenance="G=z+1/2, s=-1, f=-[2z]/4; Phi=q^(1/2)/(4(1+q))((-1)^m[2eta-1/2]-[2eta+m-1/2])",
        ),
        Preset(
            "a21",
            "A(2,1)",
            ("q",),
            _a21,
            _table_a21,
            convention=TableConvention.rescaled,
            table_factor=_factor_a21,
            provenance="G=qz-1, s=1, f=2z(1+(1-q)z); Phi=(1-q^(2m))(eta+1/(1-q))(eta-(q+...+q^(m-1))/(1+q^m))",
        ),
        Preset(
            "a31_plus",
            "A+(3,1)",
            ("q",),
            _a31_plus,
            _table_a31_plus,
            provenance="G=qz-1, s=1, f=2z(1-(1-q)^2 z^2); Phi=rho(eta)-rho(q^m eta-(1-q^m)/(1-q)), rho solved",
        ),
        Preset(
            "def_osp12",
            "deformed U(osp(1|2))",
            ("f",),
            _def_osp12,
            provenance="G=1+z, s=-1, f any polynomial",
            param_kinds={"f": "polynomial"},
        ),
        Preset(
            "w3_2",
            "W_3^(2)",
            ("c",),
            _w3_2,
            _table_w3_2,
            provenance="G=2+z, s=1, f=-(z^2+c); Phi=-m eta^2-2m(m-1)eta-m(4/3 m^2-2m+c+2/3)",
        ),
        Preset(
            "def_su2",
            "deformed U(su(2))",
            ("phi",),
            _def_su2,
            _table_def_su2,
            convention=TableConvention.global_minus,
            provenance="G=1+z, s=1, f=phi(z(z-1))-phi(z(z+1)); Phi=phi((eta+m)(eta+m-1))-phi(eta(eta-1))",
            param_kinds={"phi": "polynomial"},
        ),
        Preset(
            "poly_sl2",
            "polynomial sl(2)",
            ("n",),
            _poly_sl2,
            _table_poly_sl2,
            convention=TableConvention.global_minus,
            provenance="G=1+z, s=1, f=z^n-(z+1)^n; Phi=(eta+m)^n-eta^n",
            param_kinds={"n": "integer"},
        ),
    ]
}


def list_presets() -> List[Dict[str, Any]]:
    return [PRESETS[key].describe() for key in sorted(PRESETS)]


def _lookup(key: str) -> Preset:
    try:
        return PRESETS[key]
    except KeyError:
        raise UnknownPresetError(f"unknown preset {key!r}; known: {', '.join(sorted(PRESETS))}")


def _bind(value: Any, mode: ScalarMode) -> Any:
    if isinstance(value, ExpPoly):
        return value if mode is ScalarMode.exact else value.promote(mode)
    return promote(value, mode)


def get_preset(
    key: str, params: Optional[Mapping[str, Any]] = None, mode: ScalarMode = ScalarMode.exact
) -> AlgebraSpec:
    """Validated AlgebraSpec for a preset with its parameters bound to ``mode`` scalars."""
    preset = _lookup(key)
    mode = ScalarMode(mode)
    try:
        raw = {k: parse_param(v) for k, v in (params or {}).items()}
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InvalidParamError(f"bad parameter for preset {key}: {exc}") from exc
    missing = [name for name in preset.required if name not in raw]
    if missing:
        raise MissingParamError(f"preset {key} needs parameter(s): {', '.join(missing)}")
    bound = {k: _bind(v, mode) if k != "n" else v for k, v in raw.items()}
    G, f, s = preset.builder(bound)
    spec = AlgebraSpec(name=key, s=s, G=G, f=f, params=bound)
    if mode is not ScalarMode.exact:
        spec = spec.promote(mode)
    return ensure_valid(spec)


@dataclass
class ComparisonRow:
    m: int
    phi: ExpPoly
    table: ExpPoly
    factor: Optional[Scalar]
    agrees: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "phi": self.phi.to_json(),
            "table": self.table.to_json(),
            "factor": None if self.factor is None else format_scalar(self.factor),
            "agrees": self.agrees,
        }


@dataclass
class ComparisonReport:
    key: str
    convention: TableConvention
    expected_factor: Scalar
    rows: List[ComparisonRow] = field(default_factory=list)
    note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(row.agrees for row in self.rows)

    @property
    def flagged(self) -> bool:
        """The table row differs from direct evaluation by a recorded factor."""
        return self.convention is not TableConvention.matches_defphi

    @property
    def sign_flag(self) -> bool:
        return self.convention is TableConvention.global_minus

    def to_json(self) -> Dict[str, Any]:
        data = {
            "key": self.key,
            "convention": self.convention.value,
            "expected_factor": format_scalar(self.expected_factor),
            "flagged": self.flagged,
            "sign_flag": self.sign_flag,
            "ok": self.ok,
            "rows": [row.to_json() for row in self.rows],
        }
        if self.note:
            data["note"] = self.note
        return data


def _leading(p: ExpPoly) -> Optional[Scalar]:
    if p.is_zero:
        return None
    return p.terms[-1].coeffs[-1]


def _observed_factor(phi: ExpPoly, table: ExpPoly) -> Optional[Scalar]:
    """c with phi = c * table, or None when they are not proportional."""
    if phi.is_zero and table.is_zero:
        return Fraction(1)
    lead_phi, lead_table = _leading(phi), _leading(table)
    if lead_phi is None or lead_table is None:
        return None
    c = lead_phi / lead_table
    return c if phi.isclose(table.scale(c)) else None


def compare_with_table(
    key: str,
    params: Optional[Mapping[str, Any]] = None,
    m_max: int = 5,
    mode: ScalarMode = ScalarMode.exact,
) -> ComparisonReport:
    """phi_symbolic against the tabulated closed form for m = 1..m_max."""
    preset = _lookup(key)
    if preset.table_phi is None:
        raise InvalidParamError(f"preset {key} has no tabulated Phi")
    if preset.table_float_only and mode is ScalarMode.exact:
        mode = ScalarMode.real
        logger.warning("table for %s is compared in float mode", key)
    spec = get_preset(key, params, mode)
    if preset.convention is TableConvention.matches_defphi:
        expected: Scalar = Fraction(1)
    elif preset.convention is TableConvention.global_minus:
        expected = Fraction(-1)
    else:
        expected = preset.table_factor(spec.params)
    report = ComparisonReport(key=key, convention=preset.convention, expected_factor=expected)
    if preset.table_factor is not None:
        report.note = "tabulated closed form differs from direct evaluation by a constant factor"
    for m in range(1, m_max + 1):
        try:
            phi = phi_symbolic(spec, m)
            table = preset.table_phi(spec, spec.params, m)
        except ClosureError as exc:
            report.note = str(exc)
            break
        factor = _observed_factor(phi, table)
        agrees = factor is not None and (
            factor == expected if mode is ScalarMode.exact else abs(factor - expected) <= 1e-9
        )
        report.rows.append(ComparisonRow(m, phi, table, factor, agrees))
    return report


def table_phi(key: str, params: Optional[Mapping[str, Any]], m: int, mode: ScalarMode = ScalarMode.exact) -> ExpPoly:
    preset = _lookup(key)
    if preset.table_phi is None:
        raise InvalidParamError(f"preset {key} has no tabulated Phi")
    spec = get_preset(key, params, mode)
    return preset.table_phi(spec, spec.params, m)


__all__ = ["PRESETS", "Preset", "TableConvention", "compare_with_table", "get_preset", "list_presets"]
