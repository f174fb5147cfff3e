"""Exception types shared across the package."""


class LpmimoError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(LpmimoError):
    """Invalid antenna geometry or synthesis parameters out of bounds."""


class SynthesisOverflowError(GeometryError):
    """Synthesis would need more elements than the configured cap."""


class SingularSystemError(LpmimoError):
    """The drive linear system is singular at a specific frequency."""

    def __init__(self, frequency_mhz: float, detail: str = ""):
        self.frequency_mhz = frequency_mhz
        msg = f"singular drive system at {frequency_mhz:g} MHz"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ConfigError(LpmimoError):
    """Bad run configuration; carries the offending key path."""

    def __init__(self, key_path: str, detail: str):
        self.key_path = key_path
        super().__init__(f"config error at {key_path}: {detail}")
