from fastapi.testclient import TestClient


def test_cn_table(test_client: TestClient):
    """Test the first terms of the c_n recurrence"""
    response = test_client.get("/tables/cn", params={"p": 3, "n": 4})
    assert response.status_code == 200
    assert response.json() == {"p": 3, "values": [-3, 3, 0, -9]}


def test_cn_table_rejects_even_prime(test_client: TestClient):
    response = test_client.get("/tables/cn", params={"p": 2, "n": 4})
    assert response.status_code == 422


def test_precision_plan(test_client: TestClient):
    response = test_client.get("/tables/plan", params={"p": 3, "digits": 24})
    assert response.status_code == 200
    data = response.json()
    assert data["M"] == 63
    assert data["W"] == 24
    assert data["W_guard"] > data["W"]


def test_precision_plan_needs_digits(test_client: TestClient):
    response = test_client.get("/tables/plan", params={"p": 3})
    assert response.status_code == 422
