"""Exception hierarchy shared by all physdrive modules.

The CLI maps these onto exit codes: ValidationError and subclasses -> 1,
CompatibilityError -> 2, NumericError -> 3.
"""


class PhysdriveError(Exception):
    """Base class for all physdrive errors."""


class ValidationError(PhysdriveError):
    """Invalid input, configuration, or precondition violation."""


class RangeError(ValidationError):
    """An attribute value lies outside its declared bounds."""


class CapacityError(ValidationError):
    """A variable-length attribute exceeds its fixed padded capacity."""


class DomainError(ValidationError):
    """A scalar argument is outside the mathematical domain of an operation."""


class ConfigError(ValidationError):
    """Malformed or unresolvable run configuration."""


class ProtocolError(ValidationError):
    """An evaluation protocol rule was violated (e.g. train/eval overlap)."""


class GenerationError(ValidationError):
    """Procedural generation produced an invalid artifact (e.g. route)."""


class CompatibilityError(PhysdriveError):
    """Artifact hashes or seeds do not match the active run configuration."""


class NumericError(PhysdriveError):
    """NaN/Inf encountered, or an iterative procedure diverged."""
