"""Exception types shared across the package."""


class PolardemError(Exception):
    """Base class for all polardem errors."""


class InvalidDimensions(PolardemError, ValueError):
    """Image is empty or not a 2D plane."""


class DimensionMismatch(PolardemError, ValueError):
    """Operands that must share a shape do not."""


class OddDimensions(PolardemError, ValueError):
    """Operation requires even image dimensions."""


class EmptyMask(PolardemError, ValueError):
    """A sample mask with no valid pixel was supplied."""


class UnsupportedFormat(PolardemError, ValueError):
    """Image file format or bit depth not supported."""


class IoError(PolardemError, OSError):
    """Image or dataset file could not be read or written."""


class DatasetError(PolardemError, ValueError):
    """Dataset manifest or scene is malformed."""


class ConfigError(PolardemError, ValueError):
    """Experiment configuration is invalid."""
