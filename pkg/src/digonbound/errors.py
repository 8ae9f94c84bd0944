"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the closed unit disk, or otherwise out of a map's domain."""


class RangeError(ValueError):
    """Requested preimage of a point the map does not attain (e.g. on an omitted slit)."""


class NoLimitError(RuntimeError):
    """Radial sequence failed to settle; no angular limit could be extracted."""


class InfiniteDerivativeError(RuntimeError):
    """Difference quotients diverge: the angular derivative is infinite."""


class ConfigurationError(ValueError):
    """Extremal-configuration solve failed (root off the circle, bad data, ...)."""


class LabelingError(ConfigurationError):
    """Solved zeros do not interlace the anchors one per arc."""


class PathError(RuntimeError):
    """Branch-tracking path passed through (or too close to) a vertex."""


class IntegrationError(RuntimeError):
    """Trajectory integration left the disk or otherwise failed hard."""


class InsufficientDataError(RuntimeError):
    """A sampled map does not extend far enough along the requested ray."""


class DegenerateAnchorError(ValueError):
    """An anchor with boundary derivative exactly 1 where the optimal heights are undefined."""
