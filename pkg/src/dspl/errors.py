"""Error taxonomy shared across the package.

Every operation raises one of these instead of bare ValueError/RuntimeError so
the CLI can map failures onto its exit-code contract (invalid usage -> 2,
everything else hard -> 1).
"""


class InvalidArgumentError(ValueError):
    """Preconditions violated: bad ranges, wrong ordering, unknown enum values."""


class TableTooSmallError(InvalidArgumentError):
    """A prime table does not reach far enough for the requested computation."""


class ResourceLimitError(RuntimeError):
    """A declared memory or work budget would be exceeded."""


class CorruptCacheError(RuntimeError):
    """Prime-cache file is truncated, mangled, or fails its checksum."""


class UnsupportedVersionError(RuntimeError):
    """Prime-cache file has a valid magic but an unknown version."""
