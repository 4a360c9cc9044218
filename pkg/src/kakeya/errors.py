"""Exception hierarchy shared by all kakeya modules."""


class KakeyaError(Exception):
    """Base class for errors raised by this package."""


class NotAPrimePower(KakeyaError, ValueError):
    pass


class DivisionByZero(KakeyaError, ZeroDivisionError):
    pass


class WrongCharacteristic(KakeyaError, ValueError):
    pass


class ZeroLeadingCoefficient(KakeyaError, ValueError):
    pass


class WrongFieldKind(KakeyaError, ValueError):
    pass


class UnsupportedField(KakeyaError, ValueError):
    pass


class TooLarge(KakeyaError, ValueError):
    pass


class DimensionMismatch(KakeyaError, ValueError):
    pass


class LinearFunction(KakeyaError, ValueError):
    pass


class BadK(KakeyaError, ValueError):
    pass


class ConditionViolated(KakeyaError, ValueError):
    pass


class ZeroPolynomial(KakeyaError, ValueError):
    pass


class ParseError(KakeyaError, ValueError):
    pass


class AttemptsExhausted(KakeyaError, RuntimeError):
    """Random-rotation retries ran out before every direction was covered."""

    def __init__(self, attempts: int, best_coverage: float):
        super().__init__(
            f"no Kakeya set after {attempts} attempts (best direction coverage {best_coverage:.4f})"
        )
        self.attempts = attempts
        self.best_coverage = best_coverage


class BudgetExhausted(KakeyaError, RuntimeError):
    """Search node budget ran out; carries the interval known so far."""

    def __init__(self, lower: int, best_found: int, nodes: int):
        super().__init__(
            f"search budget exhausted after {nodes} nodes; minimum lies in [{lower}, {best_found}]"
        )
        self.lower = lower
        self.best_found = best_found
        self.nodes = nodes
