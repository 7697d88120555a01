from unittest.mock import patch

from fastapi.testclient import TestClient


def test_fan_endpoint(test_client: TestClient):
    """Test the fan of the identity class for Q(sqrt(37)), f = 2"""
    response = test_client.post("/fan", json={"d": 37, "f": "2"})
    assert response.status_code == 200
    data = response.json()
    assert len(data["rho"]) >= 2
    assert len(data["cones"]) == len(data["rho"]) - 1
    assert data["point_count"] == sum(c["points"] for c in data["cones"])
    assert all(b >= 2 for b in data["partial_quotients"])


def test_fan_endpoint_with_label(test_client: TestClient):
    response = test_client.post("/fan", json={"d": 89, "f": "P5", "label": [1], "p": 11})
    assert response.status_code == 200
    assert response.json()["point_count"] > 0


def test_fan_endpoint_bad_discriminant(test_client: TestClient):
    response = test_client.post("/fan", json={"d": 20, "f": "2"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "InvalidDiscriminant"


def test_fan_endpoint_unexpected_error(test_client: TestClient):
    with patch("src.app.routers.fan.process_fan", side_effect=RuntimeError("boom")):
        response = test_client.post("/fan", json={"d": 37, "f": "2"})
        assert response.status_code == 500
        assert "boom" in response.json()["detail"]
