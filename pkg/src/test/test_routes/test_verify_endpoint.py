from fastapi.testclient import TestClient


def test_verify_example(test_client: TestClient):
    """Test the verification report for the first example"""
    response = test_client.post("/verify", json={"example": 1})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["A"] == "(1/2)(1 - σ - σ²)"
    assert data["d_f"] == 2
    assert data["index_eta"] == "4"
    assert data["clauses"]["existence"] == "pass"
    assert data["clauses"]["denominator"] == "pass"


def test_verify_explicit_data(test_client: TestClient, examples):
    bundle = examples[1]
    payload = {
        "d": bundle.d_k,
        "f": bundle.f,
        "group": bundle.group,
        "data": bundle.verification.model_dump(mode="json"),
    }
    response = test_client.post("/verify", json=payload)
    assert response.status_code == 200
    assert response.json()["d_f"] == 2


def test_verify_incomplete_request(test_client: TestClient):
    response = test_client.post("/verify", json={"d": 37, "f": "2"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "HypothesisViolation"


def test_verify_unknown_example(test_client: TestClient):
    response = test_client.post("/verify", json={"example": 99})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "BundleError"
