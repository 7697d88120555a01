from unittest.mock import patch

from fastapi.testclient import TestClient

from src.app.core.errors import BundleError


def test_list_examples(test_client: TestClient):
    """Test listing the bundled examples"""
    response = test_client.get("/examples")
    assert response.status_code == 200
    data = response.json()
    assert [e["id"] for e in data] == list(range(1, 16))
    assert data[0]["d_k"] == 37
    assert data[0]["primes"] == [3, 7, 11]
    assert data[14]["group"] == [3, 3]


def test_get_example(test_client: TestClient):
    response = test_client.get("/examples/8")
    assert response.status_code == 200
    data = response.json()
    assert data["d_k"] == 401
    assert data["group"] == [10]


def test_missing_example(test_client: TestClient):
    response = test_client.get("/examples/99")
    assert response.status_code == 404
    assert response.json()["detail"]["error"] == "BundleError"


def test_validate_examples_success(test_client: TestClient):
    """Test validating every bundle"""
    response = test_client.post("/examples/validate")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "success"
    assert len(data["results"]) == 15


def test_validate_examples_partial(test_client: TestClient):
    mock_results = [
        {"status": "success", "path": "ex01.json", "id": 1},
        {"status": "error", "path": "broken.json", "error": "invalid JSON"},
    ]
    with patch("src.app.routers.examples.ingest_directory", return_value=mock_results):
        response = test_client.post("/examples/validate")
        assert response.status_code == 207
        assert response.json()["status"] == "partial"


def test_validate_examples_all_failed(test_client: TestClient):
    mock_results = [{"status": "error", "path": "broken.json", "error": "invalid JSON"}]
    with patch("src.app.routers.examples.ingest_directory", return_value=mock_results):
        response = test_client.post("/examples/validate")
        assert response.status_code == 500
        assert response.json()["status"] == "error"


def test_validate_examples_none_found(test_client: TestClient):
    with patch("src.app.routers.examples.ingest_directory", return_value=[]):
        response = test_client.post("/examples/validate")
        assert response.status_code == 404
        assert "No example bundles found" in response.json()["detail"]


def test_validate_examples_missing_directory(test_client: TestClient):
    with patch(
        "src.app.routers.examples.ingest_directory",
        side_effect=BundleError("examples directory not found: /nowhere"),
    ):
        response = test_client.post("/examples/validate")
        assert response.status_code == 500
        assert response.json()["detail"]["error"] == "BundleError"
