import sys
from pathlib import Path

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from fastapi.testclient import TestClient
from app.main import app
from app.core.config import settings

# Test client
client = TestClient(app)

API = settings.API_V1_STR


def test_read_main():
    """Test the main endpoint."""
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {
        "message": f"Welcome to the {settings.PROJECT_NAME} API",
        "docs": "/docs",
        "redoc": "/redoc"
    }

def test_read_presets():
    """Test listing the preset algebras."""
    response = client.get(f"{API}/presets/")
    assert response.status_code == 200, f"Failed to list presets: {response.text}"
    keys = [p["key"] for p in response.json()]
    assert keys == sorted(keys)
    assert "a21" in keys

def test_read_preset():
    response = client.get(f"{API}/presets/a21")
    assert response.status_code == 200
    data = response.json()
    assert data["convention"] == "rescaled"
    assert data["params"] == [{"name": "q", "kind": "scalar"}]

def test_read_unknown_preset():
    response = client.get(f"{API}/presets/sl3")
    assert response.status_code == 404
    assert response.json()["detail"]["code"] == "unknown_preset"

def test_phi_value():
    """Test evaluating Phi at a weight."""
    payload = {"preset": "w3_2", "params": {"c": "0"}, "m": 2, "eta": "1"}
    response = client.post(f"{API}/algebras/phi", json=payload)
    assert response.status_code == 200, f"Failed to evaluate Phi: {response.text}"
    assert response.json()["value"] == "-10"

def test_phi_from_inline_algebra():
    payload = {
        "algebra": {
            "s": "-1",
            "G": {"terms": [{"coeffs": ["1/2", "1"]}]},
            "f": {"terms": [{"coeffs": ["0", "-1/2"]}]},
        },
        "m": 2,
    }
    response = client.post(f"{API}/algebras/phi", json=payload)
    assert response.status_code == 200, response.text
    assert response.json()["phi"] == {"terms": [{"coeffs": ["-1/4"], "base": "1"}]}

def test_verify_module():
    """Test verifying a module at a root of Phi."""
    payload = {"preset": "a21", "params": {"q": "1/2"}, "n": 2, "eta": "2/5"}
    response = client.post(f"{API}/algebras/verify", json=payload)
    assert response.status_code == 200, f"Failed to verify: {response.text}"
    data = response.json()
    assert data["ok"] is True
    assert data["N"] == 2
    assert data["casimir_checked"] is True

    payload["eta"] = "-2"
    response = client.post(f"{API}/algebras/verify", json=payload)
    assert response.status_code == 200
    assert response.json()["ok"] is False

def test_casimir():
    payload = {
        "algebra": {
            "name": "su2",
            "s": "1",
            "G": {"terms": [{"coeffs": ["1", "1"], "base": "1"}]},
            "f": {"terms": [{"coeffs": ["0", "-2"], "base": "1"}]},
        },
        "eta": "-1",
        "dim": 3,
    }
    response = client.post(f"{API}/algebras/casimir", json=payload)
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["rho"] == {"terms": [{"coeffs": ["0", "-1", "1"], "base": "1"}]}
    assert data["eigenvalues"] == ["2", "2", "2"]
    assert client.post(f"{API}/algebras/casimir", json=payload).json() == data

def test_casimir_reflected_bases():
    payload = {
        "algebra": {
            "name": "reflect",
            "s": "2",
            "G": {"terms": [{"coeffs": ["1", "-1"], "base": "1"}]},
            "f": {"terms": [{"coeffs": ["1"], "base": "2"}]},
        },
    }
    response = client.post(f"{API}/algebras/casimir", json=payload)
    assert response.status_code == 200, response.text
    assert response.json()["rho"] == {
        "terms": [{"coeffs": ["2/3"], "base": "1/2"}, {"coeffs": ["2/3"], "base": "2"}]
    }

def test_dims():
    payload = {"preset": "poly_sl2", "params": {"n": "2"}, "n_max": 3}
    response = client.post(f"{API}/algebras/dims", json=payload)
    assert response.status_code == 200, response.text
    assert response.json()["multiplicities"] == {"1": 1, "2": 1, "3": 1}

def test_table():
    payload = {"preset": "def_su2", "params": {"phi": "0,1"}, "m_max": 3}
    response = client.post(f"{API}/algebras/table", json=payload)
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["sign_flag"] is True
    assert len(data["rows"]) == 3

def test_invalid_param_is_422():
    """Test that a bad preset parameter maps to 422."""
    payload = {"preset": "uq_su2", "params": {"q": "1"}, "m": 1}
    response = client.post(f"{API}/algebras/phi", json=payload)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "invalid_param"

def test_unknown_preset_in_request_is_404():
    payload = {"preset": "sl3", "m": 1}
    response = client.post(f"{API}/algebras/phi", json=payload)
    assert response.status_code == 404
    assert response.json()["detail"]["code"] == "unknown_preset"

def test_request_validation():
    """Test request body validation."""
    response = client.post(f"{API}/algebras/phi", json={"preset": "w3_2", "params": {"c": "0"}, "m": -1})
    assert response.status_code == 422
    response = client.post(f"{API}/algebras/phi", json={"m": 1})
    assert response.status_code == 422
    response = client.post(
        f"{API}/algebras/phi",
        json={"preset": "w3_2", "params": {"c": "0"}, "algebra": {"s": "1", "G": {}, "f": {}}, "m": 1},
    )
    assert response.status_code == 422
