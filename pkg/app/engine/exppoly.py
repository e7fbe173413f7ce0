"""Exponential polynomials: finite sums of p_i(z) * b_i**z.

An ``ExpPoly`` is immutable and always canonical: one term per base, bases
sorted, trailing zero coefficients stripped and zero terms dropped. Base 1
is the pure polynomial part.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import ClosureError, InvalidBaseError, NotPolynomialError
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    join_modes,
    mode_of,
    modes_of,
    parse_scalar,
    power,
    promote,
    rational_power,
)

Coeffs = Tuple[Scalar, ...]


def _strip(coeffs: Sequence[Scalar]) -> Coeffs:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _padd(a: Sequence[Scalar], b: Sequence[Scalar]) -> List[Scalar]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a: Sequence[Scalar], b: Sequence[Scalar]) -> List[Scalar]:
    if not a or not b:
        return []
    out: List[Scalar] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _pcompose(p: Sequence[Scalar], g: Sequence[Scalar]) -> List[Scalar]:
    # Horner: p(g) = (...(p_n g + p_{n-1}) g + ...) + p_0
    out: List[Scalar] = []
    for c in reversed(p):
        out = _padd(_pmul(out, g), [c])
    return out


def _peval(p: Sequence[Scalar], z: Scalar) -> Scalar:
    acc: Scalar = 0
    for c in reversed(p):
        acc = acc * z + c
    return acc


def _base_key(base: Scalar) -> Tuple[Any, Any]:
    return (base.real, base.imag)


@dataclass(frozen=True)
class ExpTerm:
    coeffs: Coeffs
    base: Scalar

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_polynomial(self) -> bool:
        return self.base == 1


@dataclass(frozen=True)
class ExpPoly:
    terms: Tuple[ExpTerm, ...] = ()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Sequence[Scalar], Scalar]]) -> "ExpPoly":
        """Canonical ExpPoly from (coefficients, base) pairs."""
        raw = [(list(c), b) for c, b in terms]
        mode = join_modes(*(modes_of(list(c) + [b]) for c, b in raw))
        grouped: Dict[Scalar, List[Scalar]] = {}
        for coeffs, base in raw:
            base = promote(base, mode)
            if base == 0:
                raise InvalidBaseError("exponential base 0")
            if mode is not ScalarMode.complex and base < 0:
                raise InvalidBaseError(f"negative base {base} needs complex mode")
            coeffs = [promote(c, mode) for c in coeffs]
            grouped[base] = _padd(grouped.get(base, []), coeffs)
        out = []
        for base in sorted(grouped, key=_base_key):
            coeffs = _strip(grouped[base])
            if coeffs:
                out.append(ExpTerm(coeffs, base))
        return cls(tuple(out))

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    @classmethod
    def constant(cls, c: Scalar) -> "ExpPoly":
        return cls.from_terms([([c], 1)])

    @classmethod
    def identity(cls) -> "ExpPoly":
        return cls.from_terms([([0, 1], 1)])

    @classmethod
    def polynomial(cls, coeffs: Sequence[Scalar]) -> "ExpPoly":
        """Pure polynomial from ascending coefficients."""
        return cls.from_terms([(coeffs, 1)])

    @classmethod
    def exponential(cls, base: Scalar, coeffs: Sequence[Scalar] = (1,)) -> "ExpPoly":
        return cls.from_terms([(coeffs, base)])

    # -- inspection -------------------------------------------------------

    @property
    def mode(self) -> ScalarMode:
        return join_modes(*(modes_of(t.coeffs + (t.base,)) for t in self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_polynomial(self) -> bool:
        return all(t.is_polynomial for t in self.terms)

    @property
    def bases(self) -> Tuple[Scalar, ...]:
        return tuple(t.base for t in self.terms)

    @property
    def degree(self) -> int:
        """Largest polynomial degree over all terms; -1 for zero."""
        return max((t.degree for t in self.terms), default=-1)

    @property
    def poly_coeffs(self) -> Coeffs:
        """Ascending coefficients of a pure polynomial."""
        if not self.is_polynomial:
            raise NotPolynomialError(f"{self} has exponential terms")
        return self.terms[0].coeffs if self.terms else ()

    def coefficients(self) -> Dict[Tuple[Scalar, int], Scalar]:
        """(base, power of z) -> coefficient."""
        return {(t.base, j): c for t in self.terms for j, c in enumerate(t.coeffs) if c != 0}

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for t in self.terms for c in t.coeffs), default=0.0)

    def promote(self, mode: ScalarMode) -> "ExpPoly":
        return ExpPoly.from_terms(
            ([promote(c, mode) for c in t.coeffs], promote(t.base, mode)) for t in self.terms
        )

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Any) -> "ExpPoly":
        other = _coerce(other)
        return ExpPoly.from_terms(
            [(t.coeffs, t.base) for t in self.terms] + [(t.coeffs, t.base) for t in other.terms]
        )

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return self.scale(-1)

    def __sub__(self, other: Any) -> "ExpPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Any) -> "ExpPoly":
        return _coerce(other) - self

    def __mul__(self, other: Any) -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return self.scale(other)
        # b1**z * b2**z = (b1*b2)**z
        return ExpPoly.from_terms(
            (_pmul(a.coeffs, b.coeffs), a.base * b.base) for a in self.terms for b in other.terms
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExpPoly":
        if n < 0:
            raise ValueError("negative power")
        out = ExpPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: Scalar) -> "ExpPoly":
        return ExpPoly.from_terms(([c * x for x in t.coeffs], t.base) for t in self.terms)

    # -- composition and evaluation --------------------------------------

    def compose_affine(self, alpha: Scalar, beta: Scalar) -> "ExpPoly":
        """p(alpha*z + beta).

        A term p(z) b**z becomes p(alpha z + beta) * b**beta * (b**alpha)**z.
        In exact mode b**alpha and b**beta must be rational.
        """
        exact = (
            self.mode is ScalarMode.exact
            and mode_of(alpha) is ScalarMode.exact
            and mode_of(beta) is ScalarMode.exact
        )
        out = []
        for t in self.terms:
            coeffs = _pcompose(t.coeffs, [beta, alpha])
            if t.base == 1:
                out.append((coeffs, t.base))
                continue
            if exact:
                factor = rational_power(t.base, beta)
                new_base = rational_power(t.base, alpha)
                if factor is None or new_base is None:
                    raise ClosureError(
                        f"{t.base}**{alpha} or {t.base}**{beta} is irrational; use float mode"
                    )
            else:
                factor, new_base = power(t.base, beta), power(t.base, alpha)
            out.append(([c * factor for c in coeffs], new_base))
        return ExpPoly.from_terms(out)

    def compose_poly(self, g: "ExpPoly") -> "ExpPoly":
        """p(g(z)) for pure polynomials p and g."""
        if not self.is_polynomial or not g.is_polynomial:
            raise NotPolynomialError("general composition needs pure polynomials")
        return ExpPoly.polynomial(_pcompose(self.poly_coeffs, g.poly_coeffs))

    def compose(self, g: "ExpPoly") -> "ExpPoly":
        """p(g(z)), affine when g has degree <= 1 so exponential terms survive."""
        if g.is_polynomial and g.degree <= 1:
            coeffs = g.poly_coeffs
            beta = coeffs[0] if coeffs else Fraction(0)
            alpha = coeffs[1] if len(coeffs) > 1 else Fraction(0)
            return self.compose_affine(alpha, beta)
        return self.compose_poly(g)

    def evaluate(self, z: Scalar) -> Scalar:
        """Sum of p_i(z) * b_i**z; falls back to floats when a power is irrational."""
        total: Scalar = Fraction(0) if self.mode is ScalarMode.exact else 0.0
        for t in self.terms:
            value = _peval(t.coeffs, z)
            if t.base != 1:
                value = value * power(t.base, z)
            total = total + value
        return total

    __call__ = evaluate

    # -- comparison -------------------------------------------------------

    def isclose(self, other: "ExpPoly", tol: Optional[float] = None) -> bool:
        """Exact equality in exact mode, coefficient-wise tolerance otherwise."""
        if self.mode is ScalarMode.exact and other.mode is ScalarMode.exact:
            return self == other
        tol = settings.FLOAT_TOL if tol is None else tol
        if len(self.terms) == len(other.terms) and all(
            abs(a.base - b.base) <= tol * max(1.0, abs(a.base))
            for a, b in zip(self.terms, other.terms)
        ):
            for a, b in zip(self.terms, other.terms):
                for j in range(max(len(a.coeffs), len(b.coeffs))):
                    x = a.coeffs[j] if j < len(a.coeffs) else 0
                    y = b.coeffs[j] if j < len(b.coeffs) else 0
                    if abs(x - y) > tol:
                        return False
            return True
        return (self - other).max_abs_coefficient() <= tol

    # -- serialization ----------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "terms": [
                {"coeffs": [format_scalar(c) for c in t.coeffs], "base": format_scalar(t.base)}
                for t in self.terms
            ]
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ExpPoly":
        return cls.from_terms(
            ([parse_scalar(c) for c in term["coeffs"]], parse_scalar(term.get("base", "1")))
            for term in data.get("terms", [])
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            poly = " + ".join(
                f"{c}" if j == 0 else (f"{c}*z" if j == 1 else f"{c}*z^{j}")
                for j, c in enumerate(t.coeffs)
                if c != 0
            )
            parts.append(f"({poly})" if t.base == 1 else f"({poly})*({t.base})^z")
        return " + ".join(parts)


def _coerce(value: Any) -> ExpPoly:
    if isinstance(value, ExpPoly):
        return value
    return ExpPoly.constant(value)


def q_number(q: Scalar, scale: Scalar = 2, shift: Scalar = 0) -> ExpPoly:
    """The q-number [scale*z + shift] = (q**x - q**-x)/(q - 1/q) as an ExpPoly in z."""
    exact = mode_of(q) is ScalarMode.exact and mode_of(scale) is ScalarMode.exact and mode_of(
        shift
    ) is ScalarMode.exact

    def qpow(e: Scalar) -> Scalar:
        if exact:
            value = rational_power(q, e)
            if value is None:
                raise ClosureError(f"{q}**{e} is irrational; use float mode")
            return value
        return power(q, e)

    denom = q - 1 / q
    return ExpPoly.from_terms(
        [
            ([qpow(shift) / denom], qpow(scale)),
            ([-qpow(-shift) / denom], qpow(-scale)),
        ]
    )


def q_scalar(q: Scalar, x: Scalar) -> Scalar:
    """The q-number [x] for a scalar x."""
    return (power(q, x) - power(q, -x)) / (q - 1 / q)
