"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid grid, configuration file, or experiment description."""


class DegeneracyError(RuntimeError):
    """The curve lost the well-stretched property (near self-contact).

    ``pair`` holds the offending material coordinates ``(s1, s2)`` and
    ``state`` the curve values at detection time, when known.
    """

    def __init__(self, message, pair=None, state=None):
        super().__init__(message)
        self.pair = pair
        self.state = state


class FieldFormatError(ValueError):
    """Corrupt, truncated, or incompatible field file."""
