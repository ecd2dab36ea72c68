"""Exception hierarchy shared across the package.

Domain failures raise a subclass of :class:`UnimotionError`; the CLI maps
these to exit code 1 while genuine usage mistakes exit with 2.
"""


class UnimotionError(Exception):
    """Base class for all domain errors."""


class GenerationError(UnimotionError):
    """Scenario generation cannot satisfy the requested configuration."""


class ShapeError(UnimotionError):
    """Array or track shape violates an operation's contract."""


class ParseError(UnimotionError):
    """Malformed file content; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VersionError(UnimotionError):
    """File format version does not match the reader."""


class ConfigurationError(UnimotionError):
    """Missing or inconsistent configuration (vocabularies, modes, flags)."""


class CapacityError(UnimotionError):
    """Not enough data to build the requested structure."""


class RangeError(UnimotionError):
    """Index or id outside its valid range."""


class ContractError(UnimotionError):
    """Operation invoked outside its stated preconditions."""


class CompatibilityError(UnimotionError):
    """Checkpoint/vocabulary digest or config mismatch on load."""


class CapabilityError(UnimotionError):
    """Requested capability (e.g. multi-modal head) is not present."""


class LookupError_(UnimotionError):
    """Unknown agent or polyline identifier."""


class SamplingError(UnimotionError):
    """Token sampling impossible (e.g. all logits masked)."""
