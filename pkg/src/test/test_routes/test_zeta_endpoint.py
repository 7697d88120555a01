from fastapi.testclient import TestClient


def test_exact_zeta_value(test_client: TestClient):
    """Test the exact value at m = -2"""
    response = test_client.post("/zeta", json={"d": 37, "f": "2", "mode": "exact", "m": -2})
    assert response.status_code == 200
    data = response.json()
    assert data["mode"] == "exact"
    assert data["sqrt_part_vanishes"] is True
    assert len(data["rational_part"]) == 1


def test_padic_zeta_value(test_client: TestClient):
    response = test_client.post("/zeta", json={"d": 37, "f": "2", "p": 3, "digits": 5})
    assert response.status_code == 200
    data = response.json()
    assert data["formatted"].startswith("0.")
    assert data["formatted"].endswith("_3")
    assert 0 <= data["value"] < 3**5


def test_padic_zeta_needs_p(test_client: TestClient):
    response = test_client.post("/zeta", json={"d": 37, "f": "2", "mode": "padic"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "HypothesisViolation"


def test_positive_m_is_rejected(test_client: TestClient):
    response = test_client.post("/zeta", json={"d": 37, "f": "2", "mode": "exact", "m": 1})
    assert response.status_code == 422
