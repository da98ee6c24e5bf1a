"""Shared fixtures: the 6x4 walkthrough grid and seeded random inputs.

The walkthrough grid is the hand-checkable worked example used across
the suite: 15 foreground pixels, one single-pixel pore at row 3 (1-based)
column 2, and three scatter pixels in rows 5-6 that stay connected to
the border through the background channel at row 5, column 4.
"""

from __future__ import annotations

import numpy as np
import pytest

from glance import BinaryImage, GrayImage, ThresholdConfig, ThresholdMode

WALKTHROUGH_ROWS = (
    "0110",
    "1110",
    "1010",
    "1111",
    "1010",
    "1001",
)

WALKTHROUGH_TOTALS = {"L": 19, "u": 15, "z": 9, "y": 4, "w": 1, "n_p": 1}

MANUAL_128 = ThresholdConfig(mode=ThresholdMode.MANUAL, manual_value=128)


def mask_from_rows(rows) -> np.ndarray:
    return np.array([[ch == "1" for ch in row] for row in rows], dtype=bool)


def gray_from_rows(rows) -> GrayImage:
    return GrayImage(np.where(mask_from_rows(rows), 255, 0).astype(np.uint8))


@pytest.fixture
def walkthrough_mask() -> np.ndarray:
    return mask_from_rows(WALKTHROUGH_ROWS)


@pytest.fixture
def walkthrough_gray() -> GrayImage:
    return gray_from_rows(WALKTHROUGH_ROWS)


@pytest.fixture
def walkthrough_binary(walkthrough_mask) -> BinaryImage:
    return BinaryImage(walkthrough_mask, threshold=128)


@pytest.fixture
def walkthrough_csv(tmp_path):
    """The walkthrough grid as an on-disk 0/255 grid CSV."""
    lines = [",".join("255" if ch == "1" else "0" for ch in row) for row in WALKTHROUGH_ROWS]
    path = tmp_path / "walkthrough.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def random_mask(rng: np.random.Generator, max_side: int = 64) -> np.ndarray:
    """Random binary mask, 1x1 up to max_side square, at least one True."""
    rows = int(rng.integers(1, max_side + 1))
    cols = int(rng.integers(1, max_side + 1))
    density = float(rng.uniform(0.15, 0.85))
    mask = rng.random((rows, cols)) < density
    if not mask.any():
        mask[int(rng.integers(rows)), int(rng.integers(cols))] = True
    return mask


def random_gray(rng: np.random.Generator, max_side: int = 64) -> GrayImage:
    rows = int(rng.integers(1, max_side + 1))
    cols = int(rng.integers(1, max_side + 1))
    return GrayImage(rng.integers(0, 256, size=(rows, cols), dtype=np.int64))
