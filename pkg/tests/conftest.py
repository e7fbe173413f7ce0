import sys
from fractions import Fraction
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from fastapi.testclient import TestClient

from app.engine.algebra import AlgebraSpec
from app.engine.catalog import get_preset
from app.engine.exppoly import ExpPoly
from app.main import app

Z = ExpPoly.identity()


def make_spec(name, s, G, f, **params) -> AlgebraSpec:
    return AlgebraSpec(name=name, s=Fraction(s), G=G, f=f, params=params)


@pytest.fixture
def su2() -> AlgebraSpec:
    """s=1, G=z+1, f=-2z: the undeformed su(2) relations."""
    return make_spec("su2", 1, Z + 1, Z.scale(-2))


@pytest.fixture
def osp() -> AlgebraSpec:
    """s=-1, G=z+1/2, f=-z/2."""
    return make_spec("osp", -1, Z + Fraction(1, 2), Z.scale(Fraction(-1, 2)))


@pytest.fixture
def a21() -> AlgebraSpec:
    return get_preset("a21", {"q": "1/2"})


@pytest.fixture
def w3() -> AlgebraSpec:
    return get_preset("w3_2", {"c": "0"})


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


@pytest.fixture
def preset_params():
    """One valid parameter set per catalog entry."""
    return {
        "uq_su2": {"q": "2"},
        "uq_su11": {"q": "2"},
        "uq_osp12": {"q": "4"},
        "a21": {"q": "1/2"},
        "a31_plus": {"q": "1/2"},
        "def_osp12": {"f": "1,-2,3"},
        "w3_2": {"c": "1/3"},
        "def_su2": {"phi": "0,1,1"},
        "poly_sl2": {"n": "3"},
    }
