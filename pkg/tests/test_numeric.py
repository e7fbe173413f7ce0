import math
import random
from fractions import Fraction

import pytest

from app.core.errors import DivisionByZeroError, IllegalPromotionError
from app.engine.numeric import (
    ScalarMode,
    format_scalar,
    join_modes,
    mode_of,
    parse_scalar,
    power,
    promote,
    rational_arith,
    rational_power,
)


def test_rational_arith_is_canonical():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert rational_arith(Fraction(2, 4), Fraction(3), "mul") == Fraction(3, 2)
    result = rational_arith(Fraction(6, 8), Fraction(1, 4), "sub")
    assert (result.numerator, result.denominator) == (1, 2)


def test_rational_division_by_zero_is_rejected():
    with pytest.raises(DivisionByZeroError):
        rational_arith(Fraction(1), Fraction(0), "div")


def test_field_axioms_hold_exactly():
    rng = random.Random(7)

    def rand() -> Fraction:
        return Fraction(rng.randint(-50, 50), rng.randint(1, 30))

    for _ in range(200):
        a, b, c = rand(), rand(), rand()
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if b != 0:
            assert rational_arith(rational_arith(a, b, "div"), b, "mul") == a


def test_promotion_order():
    assert promote(Fraction(1, 2), ScalarMode.real) == 0.5
    assert promote(0.5, ScalarMode.complex) == complex(0.5, 0)
    third = promote(Fraction(1, 3), ScalarMode.real)
    assert abs(Fraction(third) - Fraction(1, 3)) <= Fraction(1, 2 ** 53)
    with pytest.raises(IllegalPromotionError):
        promote(0.5, ScalarMode.exact)
    with pytest.raises(IllegalPromotionError):
        promote(1j, ScalarMode.real)


def test_promotion_is_idempotent():
    for x in (Fraction(2, 7), 0.25, 1 + 2j):
        for mode in ScalarMode:
            try:
                once = promote(x, mode)
            except IllegalPromotionError:
                continue
            assert promote(once, mode) == once
            assert mode_of(once) is mode


def test_mixed_arithmetic_promotes_to_least_exact_mode():
    assert mode_of(Fraction(1, 2) + 0.5) is ScalarMode.real
    assert mode_of(Fraction(1, 2) * 1j) is ScalarMode.complex
    assert join_modes(ScalarMode.exact, ScalarMode.complex, ScalarMode.real) is ScalarMode.complex


def test_exact_powers():
    assert rational_power(Fraction(4), Fraction(1, 2)) == 2
    assert rational_power(Fraction(16, 9), Fraction(-3, 2)) == Fraction(27, 64)
    assert rational_power(Fraction(2), Fraction(1, 2)) is None
    assert power(Fraction(2), Fraction(3)) == 8
    assert mode_of(power(Fraction(2), Fraction(1, 2))) is ScalarMode.real


def test_parse_and_format():
    assert parse_scalar("-3/6") == Fraction(-1, 2)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert mode_of(parse_scalar(0.25)) is ScalarMode.real
    assert parse_scalar([1, -2]) == complex(1, -2)
    assert format_scalar(Fraction(-1, 2)) == "-1/2"
    assert format_scalar(Fraction(4)) == "4"
    assert format_scalar(0.5) == 0.5
    assert format_scalar(1j) == [0.0, 1.0]


def test_non_finite_values_format_as_strings():
    overflow = power(4.0, 1000.0)
    assert overflow == math.inf
    assert format_scalar(overflow) == "inf"
    assert format_scalar(-math.inf) == "-inf"
    assert format_scalar(math.nan) == "nan"
    assert format_scalar(complex(math.inf, 1.0)) == ["inf", 1.0]
    assert parse_scalar(format_scalar(-math.inf)) == -math.inf
