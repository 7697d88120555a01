from typing import Any, Dict


class PadicStarkError(Exception):
    """Base class for every error raised by the arithmetic engine."""

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "detail": self.message}


class NonSplitPrime(PadicStarkError):
    """p is inert or ramified in k."""


class BadF(PadicStarkError):
    """f does not divide p - 1."""


class ZeroIdeal(PadicStarkError):
    pass


class NotCoprime(PadicStarkError):
    pass


class TrivialModulus(PadicStarkError):
    pass


class NotInIdeal(PadicStarkError):
    pass


class KernelGenerator(PadicStarkError):
    """A cone generator lies in the kernel of the character."""


class KernelObstruction(PadicStarkError):
    pass


class DependentGenerators(PadicStarkError):
    pass


class NonUnitDivisor(PadicStarkError):
    pass


class PrecisionExhausted(PadicStarkError):
    pass


class InsufficientDegree(PadicStarkError):
    pass


class HypothesisViolation(PadicStarkError):
    pass


class SingularRegulator(PadicStarkError):
    pass


class ReconstructionFailed(PadicStarkError):
    def __init__(self, message: str = "", best: Any = None):
        super().__init__(message)
        self.best = best

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        if self.best is not None:
            payload["best"] = str(self.best)
        return payload


class RankMismatch(PadicStarkError):
    pass


class InconsistentGroups(PadicStarkError):
    pass


class InconsistentDimensions(PadicStarkError):
    pass


class NegativeValuation(PadicStarkError):
    pass


class BundleError(PadicStarkError):
    """An example bundle failed to load or validate."""


class InvalidDiscriminant(PadicStarkError):
    """d_k is not the discriminant of a real quadratic field."""
