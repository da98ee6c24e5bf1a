"""Exception types shared across the package.

Every error raised on a contract violation derives from GlanceError so
callers (and the CLI) can catch one base type.
"""

from __future__ import annotations


class GlanceError(Exception):
    """Base class for all errors raised by this package."""


# --- image loading ---

class MalformedHeaderError(GlanceError):
    """PGM header (or sample stream) could not be parsed."""


class TruncatedDataError(GlanceError):
    """PGM raster ended before the declared pixel count."""


class UnsupportedMagicError(GlanceError):
    """Magic number is not P2 or P5."""


class RaggedRowsError(GlanceError):
    """Grid CSV rows have unequal field counts."""


class ValueOutOfRangeError(GlanceError):
    """A sample value is outside its legal range or not an integer."""


class EmptyInputError(GlanceError):
    """Grid CSV contains no rows."""


# --- binarization / features ---

class DegenerateHistogramError(GlanceError):
    """Image has a single distinct intensity; no bi-level split exists."""


class EmptyForegroundError(GlanceError):
    """No pixel classified as foreground; u = 0 is not a valid image."""


class DimensionMismatchError(GlanceError):
    """Two inputs that must share a shape or length do not."""


class InconsistentCountsError(GlanceError):
    """Counts contradict each other (e.g. pore area > 0 with zero pores)."""


class SeriesTooShortError(GlanceError):
    """Slice series has fewer than the minimum number of slices."""


# --- phantoms / classifier ---

class PhantomBoundsError(GlanceError):
    """Phantom geometry does not fit inside its canvas."""


class DatasetTooSmallError(GlanceError):
    """Dataset has too few items to split."""


class SingleClassTrainError(GlanceError):
    """Training split contains fewer than two classes."""
