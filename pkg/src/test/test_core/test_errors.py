import logging

from src.app.core.errors import (
    BundleError,
    HypothesisViolation,
    NonSplitPrime,
    PadicStarkError,
    ReconstructionFailed,
)
from src.app.core.logging import configure_logging


def test_error_payload():
    error = NonSplitPrime("5 is inert in Q(sqrt(37))")
    assert isinstance(error, PadicStarkError)
    assert error.to_dict() == {"error": "NonSplitPrime", "detail": "5 is inert in Q(sqrt(37))"}


def test_error_without_message_uses_its_name():
    assert str(HypothesisViolation()) == "HypothesisViolation"
    assert BundleError().to_dict()["detail"] == "BundleError"


def test_reconstruction_failure_carries_best_guess():
    payload = ReconstructionFailed("no rational solution", best="(1/3)(1 - σ)").to_dict()
    assert payload["error"] == "ReconstructionFailed"
    assert payload["best"] == "(1/3)(1 - σ)"
    assert "best" not in ReconstructionFailed("no rational solution").to_dict()


def test_configure_logging_sets_root_level():
    configure_logging("warning")
    assert logging.getLogger().level == logging.WARNING
    configure_logging("DEBUG")
    assert logging.getLogger().level == logging.DEBUG
