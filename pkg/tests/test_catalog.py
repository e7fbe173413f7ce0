from fractions import Fraction

import pytest

from app.core.errors import InvalidParamError, MissingParamError, UnknownPresetError
from app.engine.catalog import (
    PRESETS,
    TableConvention,
    compare_with_table,
    get_preset,
    list_presets,
    table_phi,
)
from app.engine.exppoly import ExpPoly
from app.engine.numeric import ScalarMode

Z = ExpPoly.identity()
F = Fraction


def test_catalog_lists_every_preset():
    keys = [entry["key"] for entry in list_presets()]
    assert keys == sorted(PRESETS)
    assert len(keys) == 9
    described = {entry["key"]: entry for entry in list_presets()}
    assert described["def_su2"]["params"] == [{"name": "phi", "kind": "polynomial"}]
    assert described["def_osp12"]["table_phi"] is False


def test_get_preset_builds_the_relations():
    w3 = get_preset("w3_2", {"c": "0"})
    assert w3.f == -(Z * Z)
    assert w3.G == Z + 2
    assert w3.s == 1

    uq = get_preset("uq_su11", {"q": "2"})
    assert uq.f.coefficients() == {(F(1, 4), 0): F(-2, 3), (F(4), 0): F(2, 3)}

    assert get_preset("poly_sl2", {"n": 1}).f == ExpPoly.constant(F(-1))
    assert get_preset("def_osp12", {"f": "1,-2,3"}).s == -1


def test_get_preset_in_float_mode():
    spec = get_preset("a21", {"q": "0.5"}, ScalarMode.real)
    assert spec.mode is ScalarMode.real
    assert spec.G.evaluate(2.0) == pytest.approx(0.0)


def test_get_preset_errors():
    with pytest.raises(UnknownPresetError):
        get_preset("sl3")
    with pytest.raises(MissingParamError):
        get_preset("uq_su2", {})
    for bad in ("1", "-2", "0", "abc"):
        with pytest.raises(InvalidParamError):
            get_preset("uq_su2", {"q": bad})
    with pytest.raises(InvalidParamError):
        get_preset("poly_sl2", {"n": "1/2"})


@pytest.mark.parametrize(
    "key, params",
    [
        ("w3_2", {"c": "1/3"}),
        ("uq_su2", {"q": "2"}),
        ("uq_su11", {"q": "3"}),
        ("a31_plus", {"q": "1/2"}),
    ],
)
def test_tables_that_match_direct_evaluation(key, params):
    report = compare_with_table(key, params)
    assert report.convention is TableConvention.matches_defphi
    assert report.ok
    assert not report.flagged
    assert len(report.rows) == 5
    assert all(row.factor == 1 for row in report.rows)


@pytest.mark.parametrize(
    "key, params",
    [
        ("poly_sl2", {"n": "2"}),
        ("poly_sl2", {"n": "3"}),
        ("def_su2", {"phi": "0,1"}),
    ],
)
def test_tables_with_global_minus(key, params):
    report = compare_with_table(key, params)
    assert report.ok
    assert report.sign_flag
    assert report.expected_factor == -1
    assert report.to_json()["sign_flag"] is True


def test_a21_table_is_rescaled():
    report = compare_with_table("a21", {"q": "1/2"})
    assert report.convention is TableConvention.rescaled
    assert report.expected_factor == F(4, 3)
    assert report.ok
    assert report.flagged
    assert not report.sign_flag
    assert all(row.factor == F(4, 3) for row in report.rows)
    assert report.note


def test_a21_table_has_the_factored_roots():
    table = table_phi("a21", {"q": "1/2"}, 2)
    assert table == ((Z + 2) * (Z - F(2, 5))).scale(F(15, 16))


def test_uq_osp12_table_is_compared_in_float():
    report = compare_with_table("uq_osp12", {"q": "4"}, m_max=3)
    assert report.ok
    assert all(row.phi.mode is ScalarMode.real for row in report.rows)
    assert all(abs(row.factor - 1) < 1e-9 for row in report.rows)


def test_compare_without_table():
    with pytest.raises(InvalidParamError):
        compare_with_table("def_osp12", {"f": "0,1"})
