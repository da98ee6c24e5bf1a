"""Synthetic phantoms with analytically known feature values.

Each generator paints a 0/255 grayscale image and computes the expected
counts directly from the geometry, never through the extraction pipeline.
That makes phantoms the independent end-to-end oracle: extraction must
reproduce the expected record exactly.

Randomized geometry uses numpy's seeded PCG64 generator, so identical
seeds give identical datasets on every platform.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .binarize import ThresholdConfig, ThresholdMode
from .errors import DatasetTooSmallError, PhantomBoundsError
from .features import FeatureRecord, extract
from .grid import GrayImage, Polarity

PHANTOM_THRESHOLD = ThresholdConfig(
    mode=ThresholdMode.MANUAL, manual_value=128, polarity=Polarity.DARK_BACKGROUND
)

CLASS_EYES = "eyes"
CLASS_BRAIN_NO_EYES = "brain_no_eyes"
CLASS_NO_BRAIN = "no_brain"
THREE_CLASSES = (CLASS_EYES, CLASS_BRAIN_NO_EYES, CLASS_NO_BRAIN)

CLASS_WITH_EYES = "with_eyes"
CLASS_WITHOUT_EYES = "without_eyes"
TWO_CLASSES = (CLASS_WITH_EYES, CLASS_WITHOUT_EYES)


class PhantomKind(enum.Enum):
    RECT = "rect"
    RECT_WITH_HOLE = "rect-with-hole"
    SCATTER_DOTS = "scatter-dots"
    RING = "ring"
    SLICE_SERIES = "slice-series"


@dataclass(frozen=True)
class PhantomSpec:
    """Geometry for one phantom (or one slice series)."""

    kind: PhantomKind
    rows: int = 64
    cols: int = 64
    top: int = 4
    left: int = 4
    height: int = 20
    width: int = 30
    hole_height: int = 4
    hole_width: int = 6
    hole_top: int | None = None      # None centers the hole in the rectangle
    hole_left: int | None = None
    dot_rows: int = 5
    dots_per_row: int = 6
    col_spacing: int = 4
    row_spacing: int = 3
    length: int = 32
    fault_index: int | None = None   # None puts the faulty slice last
    seed: int = 0


@dataclass(frozen=True)
class LabeledDataset:
    """Feature records with class labels for classification experiments."""

    items: tuple[tuple[FeatureRecord, str], ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({label for _, label in self.items}))

    def __len__(self) -> int:
        return len(self.items)


def _expected_record(source_id: str, rows: int, cols: int, u: int, y: int, w: int, n_p: int) -> FeatureRecord:
    z = rows * cols - u
    return FeatureRecord(
        source_id=source_id,
        rows=rows,
        cols=cols,
        threshold=128,
        u=u, z=z, y=y, w=w, n_p=n_p,
        ipf=u / (u + z),
        c=u / (u + y),
        s=y / (u + y),
        p=w / (u + w),
        w_avg=(w / n_p if n_p else None),
    )


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise PhantomBoundsError(message)


def _blank(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.uint8)


def _paint_rect(canvas: np.ndarray, top: int, left: int, h: int, w: int) -> None:
    canvas[top : top + h, left : left + w] = 255


def _paint_ring(canvas: np.ndarray, top: int, left: int, h: int, w: int) -> None:
    _paint_rect(canvas, top, left, h, w)
    canvas[top + 1 : top + h - 1, left + 1 : left + w - 1] = 0


def _check_rect_fits(spec: PhantomSpec) -> None:
    _require(spec.top >= 0 and spec.left >= 0, "rectangle offset is negative")
    _require(spec.height >= 1 and spec.width >= 1, "rectangle is empty")
    _require(
        spec.top + spec.height <= spec.rows and spec.left + spec.width <= spec.cols,
        f"{spec.height}x{spec.width} rectangle at ({spec.top},{spec.left}) "
        f"exceeds {spec.rows}x{spec.cols} canvas",
    )


def _gen_rect(spec: PhantomSpec) -> tuple[GrayImage, FeatureRecord]:
    _check_rect_fits(spec)
    canvas = _blank(spec.rows, spec.cols)
    _paint_rect(canvas, spec.top, spec.left, spec.height, spec.width)
    u = spec.height * spec.width
    return GrayImage(canvas), _expected_record("rect", spec.rows, spec.cols, u, 0, 0, 0)


def _gen_rect_with_hole(spec: PhantomSpec) -> tuple[GrayImage, FeatureRecord]:
    _check_rect_fits(spec)
    ht = spec.hole_top if spec.hole_top is not None else spec.top + (spec.height - spec.hole_height) // 2
    hl = spec.hole_left if spec.hole_left is not None else spec.left + (spec.width - spec.hole_width) // 2
    _require(spec.hole_height >= 1 and spec.hole_width >= 1, "hole is empty")
    _require(
        ht > spec.top
        and hl > spec.left
        and ht + spec.hole_height < spec.top + spec.height
        and hl + spec.hole_width < spec.left + spec.width,
        "hole must be strictly interior to its rectangle",
    )
    canvas = _blank(spec.rows, spec.cols)
    _paint_rect(canvas, spec.top, spec.left, spec.height, spec.width)
    canvas[ht : ht + spec.hole_height, hl : hl + spec.hole_width] = 0
    hole_area = spec.hole_height * spec.hole_width
    u = spec.height * spec.width - hole_area
    return (
        GrayImage(canvas),
        _expected_record("rect-with-hole", spec.rows, spec.cols, u, hole_area, hole_area, 1),
    )


def _gen_ring(spec: PhantomSpec) -> tuple[GrayImage, FeatureRecord]:
    _check_rect_fits(spec)
    _require(spec.height >= 3 and spec.width >= 3, "ring needs at least a 3x3 outline")
    canvas = _blank(spec.rows, spec.cols)
    _paint_ring(canvas, spec.top, spec.left, spec.height, spec.width)
    interior = (spec.height - 2) * (spec.width - 2)
    u = spec.height * spec.width - interior
    return GrayImage(canvas), _expected_record("ring", spec.rows, spec.cols, u, interior, interior, 1)


def _gen_scatter_dots(spec: PhantomSpec) -> tuple[GrayImage, FeatureRecord]:
    _require(spec.dot_rows >= 1 and spec.dots_per_row >= 1, "need at least one dot")
    _require(spec.col_spacing >= 2 and spec.row_spacing >= 2, "dots must be isolated (spacing >= 2)")
    last_row = spec.top + (spec.dot_rows - 1) * spec.row_spacing
    last_col = spec.left + (spec.dots_per_row - 1) * spec.col_spacing
    _require(spec.top >= 0 and spec.left >= 0, "dot grid offset is negative")
    _require(
        last_row < spec.rows and last_col < spec.cols,
        f"dot grid exceeds {spec.rows}x{spec.cols} canvas",
    )
    canvas = _blank(spec.rows, spec.cols)
    rr = spec.top + spec.row_spacing * np.arange(spec.dot_rows)
    cc = spec.left + spec.col_spacing * np.arange(spec.dots_per_row)
    canvas[np.ix_(rr, cc)] = 255
    u = spec.dot_rows * spec.dots_per_row
    # Isolated single pixels can never close an 8-connected ring, so w = 0.
    y = spec.dot_rows * (spec.dots_per_row - 1) * (spec.col_spacing - 1)
    return GrayImage(canvas), _expected_record("scatter-dots", spec.rows, spec.cols, u, y, 0, 0)


def generate(spec: PhantomSpec) -> tuple[GrayImage, FeatureRecord]:
    """Build one phantom image and its closed-form expected record."""
    if spec.kind is PhantomKind.RECT:
        return _gen_rect(spec)
    if spec.kind is PhantomKind.RECT_WITH_HOLE:
        return _gen_rect_with_hole(spec)
    if spec.kind is PhantomKind.RING:
        return _gen_ring(spec)
    if spec.kind is PhantomKind.SCATTER_DOTS:
        return _gen_scatter_dots(spec)
    raise ValueError(f"{spec.kind} is a series kind; use generate_series")


# ---------------------------
# Slice series
# ---------------------------

def _blob_with_two_holes(
    rng: np.random.Generator, rows: int, cols: int, source_id: str
) -> tuple[GrayImage, FeatureRecord]:
    """Compact blob with two small holes (areas 2 and 3) at jittered spots."""
    h = int(rng.integers(24, 35))
    w = int(rng.integers(24, 35))
    top = int(rng.integers(2, rows - h - 1))
    left = int(rng.integers(2, cols - w - 1))
    canvas = _blank(rows, cols)
    _paint_rect(canvas, top, left, h, w)
    # Hole rows stay >= 2 apart so the two pores cannot 8-touch.
    r1 = int(rng.integers(top + 2, top + h // 2 - 1))
    c1 = int(rng.integers(left + 1, left + w - 2))
    r2 = int(rng.integers(top + h // 2 + 1, top + h - 2))
    c2 = int(rng.integers(left + 1, left + w - 3))
    canvas[r1, c1 : c1 + 2] = 0
    canvas[r2, c2 : c2 + 3] = 0
    u = h * w - 5
    return GrayImage(canvas), _expected_record(source_id, rows, cols, u, 5, 5, 2)


def _lone_ring(
    rng: np.random.Generator, rows: int, cols: int, source_id: str
) -> tuple[GrayImage, FeatureRecord]:
    """Thin outline with a large trapped interior: the faulty-slice shape."""
    h = int(rng.integers(26, 35))
    w = int(rng.integers(26, 35))
    top = int(rng.integers(2, rows - h - 1))
    left = int(rng.integers(2, cols - w - 1))
    canvas = _blank(rows, cols)
    _paint_ring(canvas, top, left, h, w)
    interior = (h - 2) * (w - 2)
    u = h * w - interior
    return GrayImage(canvas), _expected_record(source_id, rows, cols, u, interior, interior, 1)


def generate_series(spec: PhantomSpec) -> list[tuple[GrayImage, FeatureRecord]]:
    """Build a slice series with one injected ring-only (faulty) slice."""
    if spec.kind is not PhantomKind.SLICE_SERIES:
        raise ValueError(f"generate_series expects SLICE_SERIES, got {spec.kind}")
    _require(spec.length >= 3, "series needs at least 3 slices")
    fault = spec.fault_index if spec.fault_index is not None else spec.length - 1
    _require(0 <= fault < spec.length, f"fault index {fault} outside series of {spec.length}")
    _require(spec.rows >= 40 and spec.cols >= 40, "series slices need at least a 40x40 canvas")
    rng = np.random.default_rng(spec.seed)
    slices = []
    for i in range(spec.length):
        source_id = f"slice_{i:03d}"
        if i == fault:
            slices.append(_lone_ring(rng, spec.rows, spec.cols, source_id))
        else:
            slices.append(_blob_with_two_holes(rng, spec.rows, spec.cols, source_id))
    return slices


# ---------------------------
# Labeled datasets
# ---------------------------

def _eyes_item(rng: np.random.Generator, rows: int, cols: int) -> GrayImage:
    """Two ring 'eyes' above a compact blob: high porousness."""
    canvas = _blank(rows, cols)
    eye_h = int(rng.integers(8, 13))
    eye_w = int(rng.integers(8, 13))
    top = int(rng.integers(2, 5))
    left1 = int(rng.integers(4, 12))
    left2 = left1 + eye_w + int(rng.integers(3, 8))
    _paint_ring(canvas, top, left1, eye_h, eye_w)
    _paint_ring(canvas, top, left2, eye_h, eye_w)
    bh = int(rng.integers(22, 31))
    bw = int(rng.integers(22, 31))
    btop = top + eye_h + int(rng.integers(2, 5))
    bleft = int(rng.integers(2, cols - bw - 1))
    _paint_rect(canvas, btop, bleft, min(bh, rows - btop - 1), bw)
    return GrayImage(canvas)


def _brain_item(rng: np.random.Generator, rows: int, cols: int) -> GrayImage:
    """Compact blob with tiny holes: high compactness, low porousness."""
    img, _ = _blob_with_two_holes(rng, rows, cols, "")
    return img


def _no_brain_item(rng: np.random.Generator, rows: int, cols: int) -> GrayImage:
    """Ring-only scan: background trapped inside a brain-like outline."""
    img, _ = _lone_ring(rng, rows, cols, "")
    return img


_CLASS_BUILDERS = {
    CLASS_EYES: _eyes_item,
    CLASS_BRAIN_NO_EYES: _brain_item,
    CLASS_NO_BRAIN: _no_brain_item,
}


def generate_dataset_images(
    n_per_class: int, seed: int, rows: int = 64, cols: int = 64
) -> list[tuple[GrayImage, FeatureRecord, str]]:
    """Three-class phantom corpus as (image, extracted record, label)."""
    if n_per_class < 10:
        raise DatasetTooSmallError(f"need at least 10 items per class, got {n_per_class}")
    rng = np.random.default_rng(seed)
    out = []
    for label in THREE_CLASSES:
        build = _CLASS_BUILDERS[label]
        for i in range(n_per_class):
            img = build(rng, rows, cols)
            rec = extract(img, PHANTOM_THRESHOLD, source_id=f"{label}_{i:03d}")
            out.append((img, rec, label))
    return out


def generate_dataset(n_per_class: int, seed: int, rows: int = 64, cols: int = 64) -> LabeledDataset:
    """Three-class labeled dataset of extracted phantom feature records."""
    triples = generate_dataset_images(n_per_class, seed, rows, cols)
    return LabeledDataset(items=tuple((rec, label) for _, rec, label in triples))


def to_two_classes(dataset: LabeledDataset) -> LabeledDataset:
    """Collapse the three scan classes into with-eyes / without-eyes."""
    items = tuple(
        (rec, CLASS_WITH_EYES if label == CLASS_EYES else CLASS_WITHOUT_EYES)
        for rec, label in dataset.items
    )
    return LabeledDataset(items=items)


def jittered_spec(kind: PhantomKind, seed: int) -> PhantomSpec:
    """Random but valid geometry for one phantom kind; useful for fuzzing."""
    rng = np.random.default_rng(seed)
    rows = int(rng.integers(16, 80))
    cols = int(rng.integers(16, 80))
    base = PhantomSpec(kind=kind, rows=rows, cols=cols, seed=seed)
    if kind in (PhantomKind.RECT, PhantomKind.RING):
        h = int(rng.integers(3, rows - 2))
        w = int(rng.integers(3, cols - 2))
        return replace(base, top=int(rng.integers(0, rows - h + 1)),
                       left=int(rng.integers(0, cols - w + 1)), height=h, width=w)
    if kind is PhantomKind.RECT_WITH_HOLE:
        h = int(rng.integers(5, rows - 2))
        w = int(rng.integers(5, cols - 2))
        top = int(rng.integers(0, rows - h + 1))
        left = int(rng.integers(0, cols - w + 1))
        hh = int(rng.integers(1, h - 3))
        hw = int(rng.integers(1, w - 3))
        return replace(
            base, top=top, left=left, height=h, width=w,
            hole_height=hh, hole_width=hw,
            hole_top=top + int(rng.integers(1, h - hh)),
            hole_left=left + int(rng.integers(1, w - hw)),
        )
    if kind is PhantomKind.SCATTER_DOTS:
        cs = int(rng.integers(2, 6))
        rs = int(rng.integers(2, 6))
        k = int(rng.integers(1, (cols - 2) // cs + 1))
        d = int(rng.integers(1, (rows - 2) // rs + 1))
        return replace(base, top=int(rng.integers(0, rows - (d - 1) * rs)),
                       left=int(rng.integers(0, cols - (k - 1) * cs)),
                       dot_rows=d, dots_per_row=k, col_spacing=cs, row_spacing=rs)
    raise ValueError(f"no jitter rule for {kind}")
