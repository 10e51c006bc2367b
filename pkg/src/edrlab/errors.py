"""Exception and warning types raised across the package."""


class EdrError(ValueError):
    """Base class for domain errors."""


class ZeroVector(EdrError):
    """A vector that had to be normalized has (numerically) zero norm."""


class NonNormalized(EdrError):
    """Amplitudes do not satisfy |alpha|^2 + |beta|^2 = 1."""


class DimensionMismatch(EdrError):
    pass


class NotHermitian(EdrError):
    pass


class NotUnitary(EdrError):
    pass


class AllSamplesDegenerate(EdrError):
    """Every sampled witness candidate projected to the zero vector."""


class DegenerateVariance(EdrError):
    pass


class DenominatorVanishes(EdrError):
    """The witness saturates the product relation, leaving a zero denominator."""


class DegenerateDenominator(EdrError):
    """A denominator factor of the modified Ozawa relation vanished.

    ``factor`` names the quantity (``epsilon_a``, ``eta_b``, ``delta_a`` or
    ``delta_b``).
    """

    def __init__(self, factor, value):
        super().__init__(f"{factor} = {value:.3e} is below the denominator guard")
        self.factor = factor
        self.value = value


class UnknownScenario(EdrError):
    pass


class EmptySweep(EdrError):
    pass


class DomainError(EdrError):
    pass


class ParseError(EdrError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(EdrError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class TightSubstitutionDomain(UserWarning):
    """eta_b > 2 in the tight Branciard substitution; eta was clamped to 2."""
