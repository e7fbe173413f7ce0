import random
from fractions import Fraction

import pytest

from app.core.errors import ValidationError
from app.engine.algebra import (
    AlgebraSpec,
    ensure_valid,
    iterate_G,
    phi_numeric,
    phi_symbolic,
    phi_values,
    validate,
)
from app.engine.catalog import PRESETS, get_preset
from app.engine.exppoly import ExpPoly
from app.engine.numeric import rational_power

Z = ExpPoly.identity()
F = Fraction


def test_validate(su2):
    assert validate(su2).ok
    bad_g = AlgebraSpec("bad", F(1), Z * Z, ExpPoly.exponential(F(2)))
    report = validate(bad_g)
    assert not report.ok
    assert any("affine" in v for v in report.violations)
    zero_s = AlgebraSpec("zero", F(0), Z + 1, Z)
    assert not validate(zero_s).ok
    with pytest.raises(ValidationError) as info:
        ensure_valid(zero_s)
    assert info.value.to_dict()["code"] == "validation_error"


def test_iterate_G(su2, a21):
    assert iterate_G(su2, 3) == Z + 3
    assert iterate_G(a21, 0) == Z
    assert iterate_G(a21, 2) == Z.scale(F(1, 4)) - F(3, 2)


def test_phi_numeric_examples(su2, w3, a21):
    assert phi_numeric(su2, F(-1), 3) == 0
    assert phi_numeric(su2, F(7, 3), 0) == 0
    assert phi_numeric(w3, F(1), 2) == -10
    assert phi_numeric(a21, F(2, 5), 2) == 0


def test_phi_symbolic_examples(su2, w3):
    assert phi_symbolic(su2, 2) == ExpPoly.polynomial([-2, -4])
    uq = get_preset("uq_su11", {"q": "2"})
    assert phi_symbolic(uq, 2).evaluate(F(1)) == F(105, 8)
    for m in range(1, 6):
        expected = ExpPoly.polynomial(
            [-m * (F(4, 3) * m * m - 2 * m + F(2, 3)), -2 * m * (m - 1), -m]
        )
        assert phi_symbolic(w3, m) == expected


def _random_eta(spec: AlgebraSpec, rng: random.Random) -> Fraction:
    """A rational weight at which every power b**eta of f stays rational."""
    halves = all(rational_power(b, F(1, 2)) is not None for b in spec.f.bases)
    if spec.f.is_polynomial:
        den = rng.randint(1, 7)
    else:
        den = rng.choice([1, 2]) if halves else 1
    return F(rng.randint(-20, 20), den)


def _phi_by_sum(spec: AlgebraSpec, eta: Fraction, m: int) -> Fraction:
    """Phi(eta, m) = sum_k s^(m-1-k) f(G^[k](eta)), walking the weights one by one."""
    total, w = F(0), eta
    for k in range(m):
        total += spec.s ** (m - 1 - k) * spec.f.evaluate(w)
        w = spec.G.evaluate(w)
    return total


@pytest.mark.parametrize("key", sorted(PRESETS))
def test_phi_matches_direct_sum_on_presets(key, preset_params):
    spec = get_preset(key, preset_params[key])
    rng = random.Random(f"sum-{key}")
    phis = []
    phi_symbolic(spec, 6, upto=phis)
    assert phis[0].is_zero
    for m in range(7):
        for _ in range(5):
            eta = _random_eta(spec, rng)
            expected = _phi_by_sum(spec, eta, m)
            assert phis[m].evaluate(eta) == expected
            assert phi_numeric(spec, eta, m) == expected


@pytest.mark.parametrize("key", sorted(PRESETS))
def test_symbolic_agrees_with_numeric(key, preset_params):
    spec = get_preset(key, preset_params[key])
    rng = random.Random(key)
    for m in range(7):
        phi = phi_symbolic(spec, m)
        for _ in range(10):
            eta = _random_eta(spec, rng)
            assert phi.evaluate(eta) == phi_numeric(spec, eta, m)


QUADRATIC = AlgebraSpec("quadratic", F(2), ExpPoly.polynomial([1, F(-1, 2), F(1, 3)]), Z)


@pytest.mark.parametrize("key", sorted(PRESETS) + ["quadratic"])
def test_iterates_of_G_compose_additively(key, preset_params):
    spec = QUADRATIC if key == "quadratic" else get_preset(key, preset_params[key])
    for m1 in range(3):
        for m2 in range(3):
            assert iterate_G(spec, m1 + m2) == iterate_G(spec, m1).compose(iterate_G(spec, m2))


def test_phi_values_lists_every_level(su2):
    assert phi_values(su2, F(-1), 3) == [0, 2, 2, 0]


def test_json_round_trip_keeps_params():
    spec = get_preset("def_su2", {"phi": "0,1"})
    again = AlgebraSpec.from_json(spec.to_json())
    assert again == spec
    assert again.params["phi"] == Z
