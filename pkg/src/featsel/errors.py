"""Exception types raised across the package."""


class FeatselError(Exception):
    """Base class for all errors raised by featsel."""


class DataError(FeatselError):
    """Malformed or unloadable input data (missing file, ragged rows, empty cells)."""


class MaskError(FeatselError):
    """Feature mask violates a boundary contract (width mismatch, empty mask)."""


class MeasureError(FeatselError):
    """A measure cannot be applied to the given data (task mismatch, wrong column
    type, degenerate target, no same-class neighbour for Relief)."""


class ConfigError(FeatselError):
    """Invalid run configuration, rejected before any data is touched."""


class SearchError(FeatselError):
    """A search was invoked with arguments it cannot honour (feature count above
    the exhaustive cap, unachievable threshold)."""
