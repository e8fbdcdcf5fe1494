"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes or register widths do not line up."""


class RankError(ValueError):
    """A matrix lacks the rank an operation needs."""


class DecodingError(ValueError):
    """No error pattern of weight <= t matches a syndrome."""


class RedundancyError(ValueError):
    """An uncompute step found a register that is not a function of its sources."""


class SeparabilityError(ValueError):
    """A register expected to be a product factor is entangled with the rest."""


class ParameterError(ValueError):
    """Key or scheme parameters fall outside the supported range."""


class SchemeMismatchError(ValueError):
    """A key and a cipher belong to different schemes."""


class ProtocolError(RuntimeError):
    """A protocol step was attempted out of order."""
