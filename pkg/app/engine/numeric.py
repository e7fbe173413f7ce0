"""Scalars: exact rationals, real floats and complex floats.

Values are plain Python numbers. ``Fraction`` is the exact mode, ``float``
the real mode and ``complex`` the complex mode; Python's own arithmetic
already promotes Fraction -> float -> complex, so the helpers here only
deal with mode bookkeeping, parsing, formatting and exact powers.
"""
import cmath
import math
import numbers
import operator
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Union

from app.core.errors import DivisionByZeroError, IllegalPromotionError

Rational = Fraction
Scalar = Union[Fraction, float, complex]


class ScalarMode(str, Enum):
    exact = "exact"
    real = "real"
    complex = "complex"


_RANK = {ScalarMode.exact: 0, ScalarMode.real: 1, ScalarMode.complex: 2}

_ARITH: Dict[str, Callable[[Fraction, Fraction], Fraction]] = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    if op not in _ARITH:
        raise ValueError(f"unknown operation {op!r}")
    if op == "div" and b == 0:
        raise DivisionByZeroError(f"{a} / 0")
    return _ARITH[op](Fraction(a), Fraction(b))


def mode_of(x: Any) -> ScalarMode:
    if isinstance(x, numbers.Rational):
        return ScalarMode.exact
    if isinstance(x, numbers.Real):
        return ScalarMode.real
    if isinstance(x, numbers.Complex):
        return ScalarMode.complex
    raise TypeError(f"not a scalar: {x!r}")


def join_modes(*modes: ScalarMode) -> ScalarMode:
    """Least exact of the given modes (exact when none given)."""
    if not modes:
        return ScalarMode.exact
    return max(modes, key=_RANK.__getitem__)


def modes_of(values: Iterable[Any]) -> ScalarMode:
    return join_modes(*(mode_of(v) for v in values))


def promote(x: Any, mode: ScalarMode) -> Scalar:
    mode = ScalarMode(mode)
    current = mode_of(x)
    if _RANK[mode] < _RANK[current]:
        raise IllegalPromotionError(f"cannot promote {current.value} value {x!r} to {mode.value}")
    if mode is ScalarMode.exact:
        return Fraction(x)
    if mode is ScalarMode.real:
        # float(Fraction) is correctly rounded
        return float(x)
    return complex(x)


def is_zero(x: Scalar, tol: float = 0.0) -> bool:
    if mode_of(x) is ScalarMode.exact or tol == 0:
        return x == 0
    return abs(x) <= tol


def isclose(a: Scalar, b: Scalar, tol: float) -> bool:
    if mode_of(a) is ScalarMode.exact and mode_of(b) is ScalarMode.exact:
        return a == b
    return abs(a - b) <= tol


def magnitude(x: Scalar) -> Union[Fraction, float]:
    """|x|, kept exact for rationals."""
    if mode_of(x) is ScalarMode.exact:
        return abs(Fraction(x))
    return abs(x)


def sign(x: Scalar) -> int:
    if mode_of(x) is ScalarMode.complex:
        raise ValueError("sign of a complex number")
    return (x > 0) - (x < 0)


def _int_root(k: int, n: int) -> Optional[int]:
    """Exact integer n-th root of k >= 0, or None."""
    if k < 2:
        return k
    if n == 2:
        r = math.isqrt(k)
        return r if r * r == k else None
    # integer Newton iteration from an upper bound
    r = 1 << ((k.bit_length() + n - 1) // n)
    while True:
        nxt = ((n - 1) * r + k // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    return r if r ** n == k else None


def rational_root(x: Fraction, n: int) -> Optional[Fraction]:
    x = Fraction(x)
    if n == 1:
        return x
    if x < 0:
        if n % 2 == 0:
            return None
        root = rational_root(-x, n)
        return None if root is None else -root
    num = _int_root(x.numerator, n)
    den = _int_root(x.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """base**exponent when it is rational, else None."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base == 0:
        if exponent <= 0:
            raise DivisionByZeroError("0 raised to a non-positive power")
        return Fraction(0)
    root = rational_root(base, exponent.denominator)
    if root is None:
        return None
    return root ** exponent.numerator


def power(base: Scalar, exponent: Scalar) -> Scalar:
    """base**exponent, exact whenever both are rational and the result is too."""
    if mode_of(base) is ScalarMode.exact and mode_of(exponent) is ScalarMode.exact:
        exact = rational_power(base, exponent)
        if exact is not None:
            return exact
    if mode_of(base) is ScalarMode.complex or mode_of(exponent) is ScalarMode.complex:
        return complex(base) ** complex(exponent)
    b, e = float(base), float(exponent)
    if b < 0 and not e.is_integer():
        return cmath.exp(complex(e) * cmath.log(b))
    try:
        return b ** e
    except OverflowError:
        return math.inf


def parse_scalar(value: Any) -> Scalar:
    """Read a scalar from its JSON/CLI form.

    Strings "p/q", "p" and decimal strings are exact; JSON floats are real;
    two-element lists [re, im] are complex.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex scalar needs [re, im], got {value!r}")
        return complex(float(parse_scalar(value[0])), float(parse_scalar(value[1])))
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if text.lower() in {"inf", "-inf", "nan", "+inf"}:
            return float(text)
        return Fraction(text)
    if isinstance(value, numbers.Rational):
        return Fraction(value)
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, numbers.Complex):
        return complex(value)
    raise TypeError(f"cannot read a scalar from {value!r}")


def _format_float(x: float) -> Union[str, float]:
    # JSON has no inf/nan; parse_scalar reads these strings back
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"


def format_scalar(x: Scalar) -> Union[str, float, List[Union[str, float]]]:
    """JSON form: "p/q" or "p" for rationals, numbers for reals, [re, im] for complex.

    Non-finite floats become "inf", "-inf" or "nan".
    """
    mode = mode_of(x)
    if mode is ScalarMode.exact:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if mode is ScalarMode.real:
        return _format_float(float(x))
    return [_format_float(float(x.real)), _format_float(float(x.imag))]
