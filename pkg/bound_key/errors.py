"""Exception hierarchy for bound_key.

Everything derives from ValueError so callers that only guard against bad input
keep working.
"""


class BoundKeyError(ValueError):
    """Base class for all domain errors."""


class DimensionMismatchError(BoundKeyError):
    """Operands have incompatible subsystem dimensions."""


class SubsystemIndexError(BoundKeyError):
    """A subsystem index is out of range or repeated."""


class NotHermitianError(BoundKeyError):
    """An operation that needs a Hermitian matrix got something else."""


class InvalidStateError(BoundKeyError):
    """Input is not a valid density matrix / private state / distribution."""


class ConstructionError(BoundKeyError):
    """A derived object failed its own validation after construction."""


class DegeneratePostselectionError(BoundKeyError):
    """A postselected branch has (numerically) zero probability."""


class MemoryCapExceededError(BoundKeyError):
    """A dense matrix would exceed the configured dimension cap."""


class ExchangeFormatError(BoundKeyError):
    """A matrix exchange document is malformed."""


class ConfigError(BoundKeyError):
    """Run configuration is invalid (CLI exit code 2)."""
