"""Roots of Phi(., N): exact rational roots, numeric polynomial roots and a
bracketing scan for real roots of exponential polynomials."""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.core.errors import NotPolynomialError, ZeroPolynomialError
from app.engine.exppoly import ExpPoly
from app.engine.numeric import ScalarMode
from app.schemas.search import RootSearchConfig

logger = logging.getLogger(__name__)

NEWTON_STEPS = 50


def _factorize(n: int) -> Dict[int, int]:
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _divisors(n: int) -> List[int]:
    out = [1]
    for prime, exp in _factorize(abs(n)).items():
        out = [d * prime ** k for d in out for k in range(exp + 1)]
    return sorted(out)


def _exact_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def rational_roots(p: ExpPoly) -> List[Fraction]:
    """All rational roots of a rational polynomial, ascending.

    Candidates come from the rational root theorem on the integer polynomial
    obtained by clearing denominators; each is confirmed by exact evaluation.
    """
    if not p.is_polynomial:
        raise NotPolynomialError("rational roots need a pure polynomial")
    if p.is_zero:
        raise ZeroPolynomialError("every number is a root of the zero polynomial")
    if p.mode is not ScalarMode.exact:
        raise NotPolynomialError("rational roots need rational coefficients")
    coeffs = [Fraction(c) for c in p.poly_coeffs]
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    roots = set()
    shift = next(i for i, c in enumerate(ints) if c != 0)
    if shift:
        roots.add(Fraction(0))
    ints = ints[shift:]
    if len(ints) > 1:
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for candidate in (Fraction(num, den), Fraction(-num, den)):
                    if _exact_eval(coeffs, candidate) == 0:
                        roots.add(candidate)
    return sorted(roots)


def numeric_poly_roots(p: ExpPoly, root_tol: Optional[float] = None) -> List[complex]:
    """All complex roots (with multiplicity) from the companion matrix, Newton-polished."""
    root_tol = RootSearchConfig().root_tol if root_tol is None else root_tol
    if not p.is_polynomial:
        raise NotPolynomialError("numeric roots need a pure polynomial")
    if p.is_zero:
        raise ZeroPolynomialError("every number is a root of the zero polynomial")
    coeffs = np.array([complex(c) for c in reversed(p.poly_coeffs)], dtype=np.complex128)
    if len(coeffs) < 2:
        return []
    deriv = np.polyder(coeffs)
    target = root_tol * float(np.max(np.abs(coeffs)))
    polished = []
    for r in np.roots(coeffs):
        for _ in range(NEWTON_STEPS):
            value = np.polyval(coeffs, r)
            if abs(value) <= target:
                break
            slope = np.polyval(deriv, r)
            if slope == 0:
                break
            step = value / slope
            candidate = r - step
            if abs(np.polyval(coeffs, candidate)) >= abs(value):
                break
            r = candidate
        polished.append(complex(r))
    return sorted(polished, key=lambda z: (z.real, z.imag))


def _eval_grid(p: ExpPoly, xs: np.ndarray) -> np.ndarray:
    total = np.zeros_like(xs, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in p.terms:
            coeffs = np.array([float(np.real(complex(c))) for c in reversed(t.coeffs)])
            values = np.polyval(coeffs, xs)
            if t.base != 1:
                values = values * np.power(float(np.real(complex(t.base))), xs)
            total = total + values
    return total


def _eval_point(p: ExpPoly, x: float) -> float:
    return float(_eval_grid(p, np.array([x], dtype=np.float64))[0])


def exp_real_roots(p: ExpPoly, cfg: Optional[RootSearchConfig] = None) -> List[float]:
    """Real roots on cfg.real_interval from sign changes on a uniform grid.

    Roots where the function touches zero without changing sign can be missed.
    """
    cfg = cfg or RootSearchConfig()
    if p.is_zero:
        raise ZeroPolynomialError("every number is a root of the zero function")
    lo, hi = cfg.real_interval
    xs = np.linspace(lo, hi, cfg.scan_steps)
    ys = _eval_grid(p, xs)
    roots: List[float] = []
    for i, y in enumerate(ys):
        if y == 0:
            roots.append(float(xs[i]))
    for i in range(len(xs) - 1):
        a, b = float(xs[i]), float(xs[i + 1])
        ya, yb = ys[i], ys[i + 1]
        if not (np.isfinite(ya) and np.isfinite(yb)) or ya == 0 or yb == 0:
            continue
        if (ya < 0) != (yb < 0):
            roots.append(_bisect(p, a, b, ya, cfg.root_tol))
    logger.debug("exponential scan on [%s, %s] found %d roots", lo, hi, len(roots))
    return dedupe_real(sorted(roots), cfg.root_tol)


def _bisect(p: ExpPoly, a: float, b: float, ya: float, tol: float) -> float:
    """Bisect until the bracket is within tol and |p| <= tol * (1 + max |coefficient|)."""
    threshold = tol * (1 + p.max_abs_coefficient())
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        ym = _eval_point(p, mid)
        if ym == 0 or (b - a <= tol and abs(ym) <= threshold):
            return mid
        if (ym < 0) == (ya < 0):
            a, ya = mid, ym
        else:
            b = mid
    return 0.5 * (a + b)


def dedupe_real(values: Sequence[float], tol: float) -> List[float]:
    out: List[float] = []
    for v in values:
        if not out or abs(v - out[-1]) > tol:
            out.append(v)
    return out
