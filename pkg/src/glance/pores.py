"""Pore detection: background regions with no 8-connected path to the border.

A background pixel belongs to a pore iff it cannot reach the image border by
stepping through background pixels (8-connectivity throughout). Pores are the
8-connected components of those trapped pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import BinaryImage

_EIGHT = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class Pore:
    id: int
    area: int


@dataclass(frozen=True, eq=False)
class PoreMap:
    """Labeling of enclosed background components.

    ``labels`` holds 0 for non-pore pixels and k >= 1 for members of pore k.
    Ids are assigned by area descending (ties by scan order), so id 1 is
    always the largest pore.
    """

    rows: int
    cols: int
    labels: np.ndarray
    pores: tuple[Pore, ...]

    @property
    def count(self) -> int:
        return len(self.pores)

    @property
    def total_area(self) -> int:
        return sum(p.area for p in self.pores)


def _background_components(bin_img: BinaryImage) -> tuple[np.ndarray, set[int]]:
    """Label background 8-components; return (labels, ids touching the border)."""
    background = ~bin_img.labels
    comp, _ = ndimage.label(background, structure=_EIGHT)
    border = np.concatenate([comp[0, :], comp[-1, :], comp[:, 0], comp[:, -1]])
    border_ids = set(np.unique(border).tolist())
    border_ids.discard(0)
    return comp, border_ids


def exterior_mask(bin_img: BinaryImage) -> np.ndarray:
    """Bool mask of background pixels reachable from the border.

    Equivalent to an 8-connected flood fill seeded at every border
    background pixel.
    """
    comp, border_ids = _background_components(bin_img)
    if not border_ids:
        return np.zeros_like(bin_img.labels, dtype=bool)
    return np.isin(comp, sorted(border_ids))


def label_pores(bin_img: BinaryImage) -> PoreMap:
    """Label every enclosed background component as a pore with its area."""
    comp, border_ids = _background_components(bin_img)
    n_comp = int(comp.max())
    pore_ids = [i for i in range(1, n_comp + 1) if i not in border_ids]

    labels = np.zeros(comp.shape, dtype=np.int32)
    pores: list[Pore] = []
    if pore_ids:
        areas = np.bincount(comp.ravel(), minlength=n_comp + 1)
        # ndimage assigns component ids in scan order, so the id itself is
        # the tie-break key for equal areas.
        ordered = sorted(pore_ids, key=lambda i: (-int(areas[i]), i))
        remap = np.zeros(n_comp + 1, dtype=np.int32)
        for new_id, old_id in enumerate(ordered, start=1):
            remap[old_id] = new_id
            pores.append(Pore(id=new_id, area=int(areas[old_id])))
        labels = remap[comp]
    labels.setflags(write=False)
    return PoreMap(rows=bin_img.rows, cols=bin_img.cols, labels=labels, pores=tuple(pores))


def per_pore_table(pm: PoreMap, u: int) -> list[tuple[int, float]]:
    """(area, percent porousness) per pore, largest first.

    Percent porousness of pore i is 100 * w_i / (u + w) where w is the
    total pore area.
    """
    denom = u + pm.total_area
    return [(p.area, 100.0 * p.area / denom) for p in pm.pores]


def _sig4(x: float) -> str:
    """Format to exactly four significant digits without exponent notation."""
    if x == 0:
        return "0.000"
    import math

    decimals = max(0, 3 - math.floor(math.log10(abs(x))))
    out = f"{x:.{decimals}f}"
    # rounding can cross a decade (99.995 -> "100.00"); reformat once
    redone = max(0, 3 - math.floor(math.log10(abs(float(out)))))
    if redone != decimals:
        out = f"{x:.{redone}f}"
    return out


def pore_table_csv(pm: PoreMap, u: int) -> str:
    """Per-pore table as CSV: pore_id, area_pixels, percent_porousness."""
    lines = ["pore_id,area_pixels,percent_porousness"]
    for pore, (area, percent) in zip(pm.pores, per_pore_table(pm, u)):
        lines.append(f"{pore.id},{area},{_sig4(percent)}")
    return "\n".join(lines) + "\n"
