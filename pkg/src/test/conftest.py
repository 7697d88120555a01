from unittest.mock import patch

import pytest
from fastapi.testclient import TestClient

from src.app.arith.quadfield import QuadField
from src.app.core.config import Settings
from src.app.main import app
from src.app.utils.literal_utils import parse_ideal
from src.ingestion.ingest import load_examples


@pytest.fixture
def test_settings():
    """Test settings"""
    return Settings(
        examples_directory="src/data/examples",
        log_level="DEBUG",
        max_workers=1,
        representative_scan_bound=1_000_000,
        class_group_generator_bound=10_000,
        reconstruction_exponent=3,
        reconstruction_guard_digits=10,
        default_digits=8,
    )


@pytest.fixture
def test_client(test_settings):
    """Test client"""
    with patch("src.app.core.config.get_settings", return_value=test_settings):
        client = TestClient(app)
        yield client


@pytest.fixture
def examples():
    """The bundled examples, freshly loaded"""
    load_examples.cache_clear()
    yield load_examples()
    load_examples.cache_clear()


@pytest.fixture
def k37():
    """Q(sqrt(37)) with f = 2O, the setting of the first published example"""
    field = QuadField(37)
    return field, parse_ideal(field, "2")
