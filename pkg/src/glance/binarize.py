"""Gray-to-binary conversion: Otsu's method or a manual threshold.

The Otsu scan compares between-class variances in exact rational
arithmetic, so threshold ties are resolved identically on every platform
(smallest winning threshold).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateHistogramError, EmptyForegroundError, ValueOutOfRangeError
from .grid import BinaryImage, GrayImage, Polarity


class ThresholdMode(enum.Enum):
    OTSU = "otsu"
    MANUAL = "manual"


@dataclass(frozen=True)
class ThresholdConfig:
    """How to pick the cut and which side of it is background."""

    mode: ThresholdMode = ThresholdMode.OTSU
    manual_value: int | None = None
    polarity: Polarity = Polarity.DARK_BACKGROUND

    def __post_init__(self):
        if self.mode is ThresholdMode.MANUAL:
            if self.manual_value is None:
                raise ValueOutOfRangeError("MANUAL mode requires manual_value")
            if not 0 <= self.manual_value <= 255:
                raise ValueOutOfRangeError(
                    f"manual threshold {self.manual_value} outside [0, 255]"
                )


def otsu_from_histogram(hist: np.ndarray) -> int:
    """Between-class-variance argmax over a 256-bin histogram.

    The low class is all intensities <= t. Scores are exact rationals:
    sigma_B^2(t) is proportional to (s0*n1 - s1*n0)^2 / (n0*n1), which
    avoids float comparisons deciding ties.
    """
    hist = np.asarray(hist, dtype=np.int64)
    if hist.shape != (256,):
        raise ValueOutOfRangeError(f"expected a 256-bin histogram, got shape {hist.shape}")
    if int((hist > 0).sum()) < 2:
        raise DegenerateHistogramError("single distinct intensity; no bi-level split exists")

    counts = hist.tolist()
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))

    best_t = -1
    best_score = Fraction(-1)
    n0 = 0
    s0 = 0
    for t in range(256):
        n0 += counts[t]
        s0 += t * counts[t]
        n1 = total_n - n0
        if n0 == 0 or n1 == 0:
            continue
        s1 = total_s - s0
        a = s0 * n1 - s1 * n0
        score = Fraction(a * a, n0 * n1)
        if score > best_score:
            best_score = score
            best_t = t
    return best_t


def otsu_threshold(img: GrayImage) -> int:
    """Otsu threshold for a grayscale image (pixels <= t form the low class)."""
    hist = np.bincount(img.pixels.ravel(), minlength=256)
    return otsu_from_histogram(hist)


def binarize(img: GrayImage, cfg: ThresholdConfig = ThresholdConfig()) -> BinaryImage:
    """Split pixels into foreground/background at the configured threshold.

    DARK_BACKGROUND takes intensities > t as foreground; LIGHT_BACKGROUND
    takes intensities <= t. Raises EmptyForegroundError when nothing
    classifies as foreground.
    """
    if cfg.mode is ThresholdMode.OTSU:
        t = otsu_threshold(img)
    else:
        t = int(cfg.manual_value)  # type: ignore[arg-type]
    if cfg.polarity is Polarity.DARK_BACKGROUND:
        fg = img.pixels > t
    else:
        fg = img.pixels <= t
    if not fg.any():
        raise EmptyForegroundError(f"no pixel above threshold {t}" if cfg.polarity is Polarity.DARK_BACKGROUND else f"no pixel at or below threshold {t}")
    return BinaryImage(fg, threshold=t, polarity=cfg.polarity)
