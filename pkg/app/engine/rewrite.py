"""Normal ordering J+ < J0 < J- by rewriting with the defining relations.

Words are sequences of J+, J- and functions h(J0); the rules are

    h(J0) J+  ->  J+ h(G(J0))
    J- h(J0)  ->  h(G(J0)) J-
    J- J+     ->  s J+ J- + f(J0)
    h1(J0) h2(J0) -> (h1 h2)(J0)

so every normal form is a sum of J+^m h(J0) J-^p with h an ExpPoly in J0.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.errors import (
    InvalidParamError,
    NotPolynomialError,
    RewriteBudgetExceededError,
    UnsupportedCoefficientError,
)
from app.engine.algebra import AlgebraSpec
from app.engine.exppoly import ExpPoly
from app.engine.numeric import Scalar

logger = logging.getLogger(__name__)


class Letter(str, Enum):
    plus = "J+"
    zero = "J0"
    minus = "J-"


class Strategy(str, Enum):
    leftmost = "leftmost"
    rightmost = "rightmost"


@dataclass(frozen=True)
class NOWord:
    letters: Tuple[Letter, ...]

    @classmethod
    def parse(cls, text: str) -> "NOWord":
        """Whitespace-separated tokens J+, J0, J-."""
        try:
            return cls(tuple(Letter(token) for token in text.split()))
        except ValueError as exc:
            raise InvalidParamError(f"bad word {text!r}: tokens are J+, J0, J-") from exc

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(letter.value for letter in self.letters)


Factor = Union[Letter, ExpPoly]
Term = Tuple[Scalar, Tuple[Factor, ...]]


@dataclass(frozen=True)
class NOForm:
    """Sum of J+^m h_{m,p}(J0) J-^p, keyed by (m, p)."""

    terms: Tuple[Tuple[Tuple[int, int], ExpPoly], ...] = ()

    @classmethod
    def from_dict(cls, data: Dict[Tuple[int, int], ExpPoly]) -> "NOForm":
        return cls(tuple(sorted((k, v) for k, v in data.items() if not v.is_zero)))

    def coefficient(self, m: int, p: int) -> ExpPoly:
        for key, value in self.terms:
            if key == (m, p):
                return value
        return ExpPoly.zero()

    def monomials(self) -> Dict[Tuple[int, int, int], Scalar]:
        """(m, n, p) -> coefficient of J+^m J0^n J-^p."""
        out: Dict[Tuple[int, int, int], Scalar] = {}
        for (m, p), h in self.terms:
            if not h.is_polynomial:
                raise UnsupportedCoefficientError(
                    "exponential J0 coefficients have no monomial expansion"
                )
            for n, c in enumerate(h.poly_coeffs):
                if c != 0:
                    out[(m, n, p)] = c
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "terms": [
                {"jplus": m, "jminus": p, "coefficient": h.to_json()} for (m, p), h in self.terms
            ]
        }


def _redex(factors: Sequence[Factor], strategy: Strategy) -> Optional[int]:
    positions = range(len(factors) - 1)
    if strategy is Strategy.rightmost:
        positions = reversed(positions)
    for i in positions:
        a, b = factors[i], factors[i + 1]
        if a is Letter.minus and (b is Letter.plus or isinstance(b, ExpPoly)):
            return i
        if isinstance(a, ExpPoly) and (b is Letter.plus or isinstance(b, ExpPoly)):
            return i
    return None


def _shift(h: ExpPoly, spec: AlgebraSpec) -> ExpPoly:
    try:
        return h.compose(spec.G)
    except NotPolynomialError as exc:
        raise UnsupportedCoefficientError(
            "moving an exponential J0 coefficient past J+- needs an affine G"
        ) from exc


def _rewrite(term: Term, i: int, spec: AlgebraSpec) -> List[Term]:
    coeff, factors = term
    head, tail = factors[:i], factors[i + 2 :]
    a, b = factors[i], factors[i + 1]
    if a is Letter.minus and b is Letter.plus:
        out = [(coeff * spec.s, head + (Letter.plus, Letter.minus) + tail)]
        if not spec.f.is_zero:
            out.append((coeff, head + (spec.f,) + tail))
        return out
    if a is Letter.minus:
        return [(coeff, head + (_shift(b, spec), Letter.minus) + tail)]
    if b is Letter.plus:
        return [(coeff, head + (Letter.plus, _shift(a, spec)) + tail)]
    product = a * b
    if product.is_zero:
        return []
    return [(coeff, head + (product,) + tail)]


def _collect(term: Term, into: Dict[Tuple[int, int], ExpPoly]) -> None:
    coeff, factors = term
    m = sum(1 for x in factors if x is Letter.plus)
    p = sum(1 for x in factors if x is Letter.minus)
    middle = next((x for x in factors if isinstance(x, ExpPoly)), ExpPoly.constant(1))
    into[(m, p)] = into.get((m, p), ExpPoly.zero()) + middle.scale(coeff)


def _as_factors(word: NOWord) -> Tuple[Factor, ...]:
    return tuple(ExpPoly.identity() if x is Letter.zero else x for x in word.letters)


def normal_order(
    word: NOWord,
    spec: AlgebraSpec,
    strategy: Strategy = Strategy.leftmost,
    budget: Optional[int] = None,
) -> NOForm:
    """Unique normal form of a word; ``strategy`` picks which redex fires first."""
    strategy = Strategy(strategy)
    if budget is None:
        budget = settings.REWRITE_STEP_FACTOR * 3 ** max(len(word), 1)
    pending: List[Term] = [(Fraction(1), _as_factors(word))]
    result: Dict[Tuple[int, int], ExpPoly] = {}
    steps = 0
    while pending:
        term = pending.pop()
        if term[0] == 0:
            continue
        i = _redex(term[1], strategy)
        if i is None:
            _collect(term, result)
            continue
        steps += 1
        if steps > budget:
            raise RewriteBudgetExceededError(f"more than {budget} rewrite steps for {word}")
        pending.extend(_rewrite(term, i, spec))
    logger.debug("normal form of %s after %d steps (%s)", word, steps, strategy.value)
    return NOForm.from_dict(result)


def phi_via_rewriting(spec: AlgebraSpec, m: int) -> ExpPoly:
    """Phi(eta, m) read off the normal form of J- J+^m on the lowest-weight vector.

    J- kills the lowest-weight vector and J0 acts on it as eta, so only the
    J+^(m-1) h(J0) term survives and contributes h(eta).
    """
    if m < 0:
        raise ValueError("m must be a natural number")
    if m == 0:
        return ExpPoly.zero()
    word = NOWord((Letter.minus,) + (Letter.plus,) * m)
    return normal_order(word, spec).coefficient(m - 1, 0)
