"""Per-row tabulation chart: span length, pixel counts, scatter and pore counts.

For each row the chart records

    L  inclusive distance from first to last foreground pixel (0 if none)
    u  foreground pixels in the row
    z  background pixels in the row
    y  background pixels strictly inside the span (y = L - u)
    w  pore pixels in the row

plus the column totals. Every scalar feature derives from these totals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .grid import BinaryImage
from .pores import PoreMap


@dataclass(frozen=True)
class RowCounts:
    L: int
    u: int
    z: int
    y: int
    w: int


@dataclass(frozen=True)
class RowTabulation:
    per_row: tuple[RowCounts, ...]
    totals: RowCounts
    rows: int
    cols: int

    @property
    def image_size(self) -> int:
        return self.rows * self.cols

    def to_csv(self) -> str:
        """Chart as CSV in column order: row id, L, u, z, y, w."""
        lines = ["row,L,u,z,y,w"]
        for i, r in enumerate(self.per_row, start=1):
            lines.append(f"R{i},{r.L},{r.u},{r.z},{r.y},{r.w}")
        t = self.totals
        lines.append(f"Total,{t.L},{t.u},{t.z},{t.y},{t.w}")
        return "\n".join(lines) + "\n"


def row_tabulation(bin_img: BinaryImage, pores: PoreMap) -> RowTabulation:
    """Build the tabulation chart for a binary image and its pore map.

    Rows with no foreground contribute (0, 0, m, 0, 0), which keeps
    y = L - u true row by row.
    """
    if (pores.rows, pores.cols) != (bin_img.rows, bin_img.cols):
        raise DimensionMismatchError(
            f"pore map is {pores.rows}x{pores.cols}, image is {bin_img.rows}x{bin_img.cols}"
        )
    fg = bin_img.labels
    m = bin_img.cols
    occupied = fg.any(axis=1)
    first = fg.argmax(axis=1)
    last = m - 1 - fg[:, ::-1].argmax(axis=1)

    span = np.where(occupied, last - first + 1, 0)
    u = fg.sum(axis=1)
    z = m - u
    y = span - u
    w = (pores.labels > 0).sum(axis=1)

    per_row = tuple(
        RowCounts(int(span[i]), int(u[i]), int(z[i]), int(y[i]), int(w[i]))
        for i in range(bin_img.rows)
    )
    totals = RowCounts(
        int(span.sum()), int(u.sum()), int(z.sum()), int(y.sum()), int(w.sum())
    )
    return RowTabulation(per_row=per_row, totals=totals, rows=bin_img.rows, cols=m)
