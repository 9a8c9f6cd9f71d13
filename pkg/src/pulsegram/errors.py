"""Exception hierarchy shared by all pulsegram modules."""


class PulsegramError(Exception):
    """Base class for every error raised by this package."""


class EmptyGeometry(PulsegramError):
    """Sensor geometry with zero width or height."""


class OutOfBounds(PulsegramError):
    """Event coordinates outside the sensor geometry."""

    def __init__(self, x: int, y: int, width: int, height: int):
        super().__init__(f"event at ({x}, {y}) outside {width}x{height} frame")
        self.x = x
        self.y = y


class ParseError(PulsegramError):
    """Malformed line in a textual input file."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class RangeError(PulsegramError):
    """Numeric value outside its permitted range."""


class ConfigError(PulsegramError):
    """Invalid generator or pipeline configuration."""


class SideTooLarge(PulsegramError):
    """Search window does not fit inside the frame."""


class NonDivisible(PulsegramError):
    """Tile side does not evenly divide the window side."""


class TooShort(PulsegramError):
    """Signal too short for the requested analysis."""


class BadBand(PulsegramError):
    """Frequency search band outside the representable range."""


class EmptyStream(PulsegramError):
    """Operation requires at least one event."""


class NoDetections(PulsegramError):
    """Error metrics requested over a set with no detected values."""


class ManifestError(PulsegramError):
    """Malformed evaluation manifest."""
