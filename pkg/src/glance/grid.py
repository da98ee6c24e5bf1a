"""Image containers, PGM / grid-CSV I/O, and right-angle transforms.

Images are immutable values: constructors copy their input and freeze the
backing array, and every transform returns a new image. That makes them
safe to share across concurrent workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyForegroundError,
    EmptyInputError,
    MalformedHeaderError,
    RaggedRowsError,
    TruncatedDataError,
    UnsupportedMagicError,
    ValueOutOfRangeError,
)


class Polarity(enum.Enum):
    """Which side of the threshold counts as background."""

    DARK_BACKGROUND = "dark"
    LIGHT_BACKGROUND = "light"


class Rotation(enum.Enum):
    """Right-angle rotations, counterclockwise."""

    R90 = 1
    R180 = 2
    R270 = 3


class Axis(enum.Enum):
    """Mirror directions: HORIZONTAL mirrors left-right, VERTICAL top-bottom."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Rectangular grid of 8-bit intensities."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueOutOfRangeError(f"expected a non-empty 2-D grid, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueOutOfRangeError(f"intensities must be integers, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueOutOfRangeError(
                f"intensities must lie in [0, 255], got [{arr.min()}, {arr.max()}]"
            )
        object.__setattr__(self, "pixels", _frozen_array(arr, np.uint8))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"GrayImage({self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Foreground/background labeling plus the threshold that produced it.

    ``labels`` is a bool grid, True = foreground. At least one foreground
    pixel is required: an image with no information is not analyzable.
    """

    labels: np.ndarray
    threshold: int
    polarity: Polarity = Polarity.DARK_BACKGROUND

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueOutOfRangeError(f"expected a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype != np.bool_:
            if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() > 1:
                raise ValueOutOfRangeError("labels must be boolean or 0/1 integers")
            arr = arr.astype(bool)
        if not arr.any():
            raise EmptyForegroundError("binary image has no foreground pixels")
        if not 0 <= int(self.threshold) <= 255:
            raise ValueOutOfRangeError(f"threshold {self.threshold} outside [0, 255]")
        object.__setattr__(self, "labels", _frozen_array(arr, bool))
        object.__setattr__(self, "threshold", int(self.threshold))

    @property
    def rows(self) -> int:
        return self.labels.shape[0]

    @property
    def cols(self) -> int:
        return self.labels.shape[1]

    @property
    def foreground_count(self) -> int:
        return int(self.labels.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryImage)
            and self.threshold == other.threshold
            and self.polarity == other.polarity
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self) -> str:
        return f"BinaryImage({self.rows}x{self.cols}, t={self.threshold}, {self.polarity.value})"


# ---------------------------
# PGM reading / writing
# ---------------------------

_WHITESPACE = b" \t\r\n\v\f"


def _read_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next header token after whitespace/comments; returns (token, new_pos)."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c in (b"#",):
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise MalformedHeaderError("unexpected end of header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _read_header_token(data, pos)
    try:
        return int(token), pos
    except ValueError:
        raise MalformedHeaderError(f"non-integer {what}: {token!r}") from None


def _rescale_to_255(samples: np.ndarray, maxval: int) -> np.ndarray:
    """Linear rescale to [0, 255], rounding half away from zero."""
    if maxval == 255:
        return samples.astype(np.uint8)
    wide = samples.astype(np.int64)
    return ((wide * 510 + maxval) // (2 * maxval)).astype(np.uint8)


def load_pgm(data: bytes) -> GrayImage:
    """Parse a PGM byte stream (ASCII P2 or binary P5) into a GrayImage.

    Maxval other than 255 is rescaled to [0, 255] so 16-bit exports load
    without a separate conversion step.
    """
    if len(data) < 2:
        raise MalformedHeaderError("input shorter than a magic number")
    magic = bytes(data[:2])
    if magic not in (b"P2", b"P5"):
        raise UnsupportedMagicError(f"unsupported magic {magic!r}; only P2/P5 are readable")
    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"non-positive dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise MalformedHeaderError(f"maxval {maxval} outside [1, 65535]")
    count = width * height

    if magic == b"P2":
        tokens = data[pos:].split()
        if len(tokens) < count:
            raise TruncatedDataError(f"expected {count} samples, found {len(tokens)}")
        try:
            samples = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError:
            raise MalformedHeaderError("non-integer sample in P2 data") from None
    else:
        # Exactly one whitespace byte separates the header from the raster.
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise MalformedHeaderError("missing whitespace before P5 raster")
        pos += 1
        bytes_per = 1 if maxval < 256 else 2
        raster = data[pos : pos + count * bytes_per]
        if len(raster) < count * bytes_per:
            raise TruncatedDataError(
                f"expected {count * bytes_per} raster bytes, found {len(raster)}"
            )
        dtype = np.uint8 if bytes_per == 1 else np.dtype(">u2")
        samples = np.frombuffer(raster, dtype=dtype).astype(np.int64)

    if samples.min() < 0 or samples.max() > maxval:
        raise ValueOutOfRangeError(
            f"sample value outside [0, {maxval}]: {int(samples.min())}..{int(samples.max())}"
        )
    return GrayImage(_rescale_to_255(samples, maxval).reshape(height, width))


def dump_pgm(img: GrayImage) -> bytes:
    """Serialize as binary P5 with maxval 255."""
    header = f"P5\n{img.cols} {img.rows}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


# ---------------------------
# Grid CSV reading / writing
# ---------------------------

def load_grid_csv(text: str) -> GrayImage:
    """Parse comma-separated intensity rows into a GrayImage.

    This is the canonical human-auditable fixture format: one CSV line per
    image row, integer fields in [0, 255].
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EmptyInputError("grid CSV has no rows")
    grid: list[list[int]] = []
    for lineno, line in enumerate(lines, start=1):
        fields = [f.strip() for f in line.split(",")]
        try:
            row = [int(f) for f in fields]
        except ValueError:
            raise ValueOutOfRangeError(f"line {lineno}: non-integer field") from None
        if grid and len(row) != len(grid[0]):
            raise RaggedRowsError(
                f"line {lineno} has {len(row)} fields, expected {len(grid[0])}"
            )
        for v in row:
            if not 0 <= v <= 255:
                raise ValueOutOfRangeError(f"line {lineno}: value {v} outside [0, 255]")
        grid.append(row)
    return GrayImage(np.array(grid, dtype=np.int64))


def dump_grid_csv(img: GrayImage) -> str:
    """Serialize as grid CSV (UTF-8 friendly, LF line endings, no trailing comma)."""
    return "\n".join(",".join(str(int(v)) for v in row) for row in img.pixels) + "\n"


# ---------------------------
# Right-angle transforms
# ---------------------------

def _transform(img, fn):
    if isinstance(img, GrayImage):
        return GrayImage(np.ascontiguousarray(fn(img.pixels)))
    if isinstance(img, BinaryImage):
        return BinaryImage(
            np.ascontiguousarray(fn(img.labels)),
            threshold=img.threshold,
            polarity=img.polarity,
        )
    raise TypeError(f"expected GrayImage or BinaryImage, got {type(img).__name__}")


def rotate(img, angle: Rotation):
    """Rotate counterclockwise by the given right angle; returns the same kind."""
    return _transform(img, lambda a: np.rot90(a, angle.value))


def flip(img, axis: Axis):
    """Mirror the image; HORIZONTAL reverses each row, VERTICAL the row order."""
    if axis is Axis.HORIZONTAL:
        return _transform(img, lambda a: a[:, ::-1])
    return _transform(img, lambda a: a[::-1, :])
