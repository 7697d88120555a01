from fastapi.testclient import TestClient


def test_health_check(test_client: TestClient):
    """Test the health check endpoint"""
    response = test_client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_every_service_is_routed(test_client: TestClient):
    paths = test_client.get("/openapi.json").json()["paths"]
    for path in ("/fan", "/zeta", "/phi", "/verify", "/tables/cn", "/tables/plan", "/examples"):
        assert path in paths
