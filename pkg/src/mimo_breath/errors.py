"""Exception types shared across the package."""


class CsiFormatError(ValueError):
    """Raised when a CSI binary file or its sidecar header is corrupt."""


class DegenerateSignalError(ValueError):
    """Raised when a constant (or all-zero) series makes a metric undefined."""


class NoBreathDetected(ValueError):
    """Raised when no in-band spectral peak rises above the noise floor."""
