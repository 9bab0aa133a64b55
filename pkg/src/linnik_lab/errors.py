"""Exception and warning types shared across the toolkit."""


class LinnikLabError(Exception):
    """Base class for all toolkit errors."""


class DomainError(LinnikLabError, ValueError):
    """An argument lies outside the range where the quantity is defined."""


class PoleError(DomainError):
    """Evaluation requested at a pole (s = 1 for the principal character)."""


class ConditioningError(DomainError):
    """The computation is too ill-conditioned to be meaningful."""


class CapacityError(LinnikLabError, ValueError):
    """A configured size cap (table memory, sieve range) would be exceeded."""


class ConfigurationError(LinnikLabError):
    """Inconsistent or incomplete configuration."""


class PrecisionWarning(UserWarning):
    """A numerical result may be less accurate than requested."""


class ImaginaryResidueWarning(PrecisionWarning):
    """A value that should be real carried a non-negligible imaginary part."""
