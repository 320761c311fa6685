"""Exception hierarchy.

Every error carries the name of the module that raised it so the CLI can
report where a computation failed.
"""


class ConcavexError(Exception):
    module = "concavex"

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class ShapeMismatch(ConcavexError, ValueError):
    module = "exact-algebra"


class NonMonomialUnit(ConcavexError, ArithmeticError):
    module = "exact-algebra"


class LambdaPole(ConcavexError, ArithmeticError):
    """Raised by the lambda -> 0 specialization; ``principal`` holds the
    terms with negative lambda exponent."""

    module = "exact-algebra"

    def __init__(self, message, principal=None):
        super().__init__(message)
        self.principal = principal


class SeriesError(ConcavexError, ValueError):
    module = "qseries"


class PolarityError(ConcavexError, ValueError):
    module = "geometry"


class HypothesisViolated(ConcavexError):
    module = "mirror"


class PositiveHbarPowers(ConcavexError):
    module = "mirror"


class InvariantViolation(ConcavexError, AssertionError):
    module = "mirror"


class DegenerateWeights(ConcavexError, ZeroDivisionError):
    module = "oracle"


class ConfigError(ConcavexError, ValueError):
    module = "cli"


class LocalizationMismatch(ConcavexError, AssertionError):
    module = "oracle"
