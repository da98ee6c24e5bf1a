"""Scalar feature assembly and the full extraction pipeline.

The integer counts (u, z, y, w, n_p) are the canonical values; the
fractions are derived from them in double precision:

    information packing factor  IPF = u / (u + z)
    compactness                 C   = u / (u + y)
    scatterness                 S   = y / (u + y) = 1 - C
    porousness                  P   = w / (u + w)
    average pore area           w_avg = w / n_p   (absent when n_p = 0)

Also here: slice-series assembly with average-pore-area anomaly flagging,
and the fixed CSV/JSON record schemas.
"""

from __future__ import annotations

import enum
import json
import statistics
from dataclasses import dataclass

from .binarize import ThresholdConfig, binarize
from .errors import (
    EmptyForegroundError,
    InconsistentCountsError,
    SeriesTooShortError,
)
from .grid import GrayImage
from .pores import label_pores
from .tabulate import row_tabulation


def ipf(u: int, total: int) -> float:
    """Fraction of the whole image occupied by foreground: u / (u + z)."""
    if u < 1:
        raise EmptyForegroundError("u = 0 is not a valid image")
    return u / total


def compactness(u: int, y: int) -> float:
    """Tightness of foreground within its own spread: u / (u + y)."""
    if u < 1:
        raise EmptyForegroundError("u = 0 is not a valid image")
    return u / (u + y)


def scatterness(u: int, y: int) -> float:
    """Complement of compactness: y / (u + y)."""
    if u < 1:
        raise EmptyForegroundError("u = 0 is not a valid image")
    return y / (u + y)


def porousness(u: int, w: int) -> float:
    """Fraction of enclosed gaps within the information area: w / (u + w)."""
    if u < 1:
        raise EmptyForegroundError("u = 0 is not a valid image")
    return w / (u + w)


def average_pore_area(w: int, n_p: int) -> float | None:
    """w / n_p, or None when the image has no pores."""
    if n_p == 0:
        if w > 0:
            raise InconsistentCountsError(f"pore area {w} > 0 with zero pores")
        return None
    return w / n_p


@dataclass(frozen=True)
class FeatureRecord:
    """All per-image scalars: raw counts plus the derived fractions."""

    source_id: str
    rows: int
    cols: int
    threshold: int
    u: int
    z: int
    y: int
    w: int
    n_p: int
    ipf: float
    c: float
    s: float
    p: float
    w_avg: float | None

    _CSV_FIELDS = (
        "source_id", "rows", "cols", "threshold",
        "u", "z", "y", "w", "n_p",
        "ipf", "c", "s", "p", "w_avg",
    )
    _FLOAT_FIELDS = ("ipf", "c", "s", "p", "w_avg")

    def to_csv_row(self) -> str:
        cells = []
        for name in self._CSV_FIELDS:
            value = getattr(self, name)
            if name in self._FLOAT_FIELDS:
                cells.append("" if value is None else f"{value:.6f}")
            else:
                cells.append(str(value))
        return ",".join(cells)

    def to_dict(self) -> dict:
        out = {}
        for name in self._CSV_FIELDS:
            value = getattr(self, name)
            if name in self._FLOAT_FIELDS and value is not None:
                value = round(value, 6)
            out[name] = value
        return out


FEATURE_CSV_HEADER = ",".join(FeatureRecord._CSV_FIELDS)


def records_to_csv(records: list[FeatureRecord]) -> str:
    lines = [FEATURE_CSV_HEADER]
    lines.extend(r.to_csv_row() for r in records)
    return "\n".join(lines) + "\n"


def records_to_json(records: list[FeatureRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2) + "\n"


def extract(img: GrayImage, cfg: ThresholdConfig = ThresholdConfig(), source_id: str = "") -> FeatureRecord:
    """Run the whole pipeline: binarize, find pores, tabulate, derive scalars."""
    bin_img = binarize(img, cfg)
    pores = label_pores(bin_img)
    tab = row_tabulation(bin_img, pores)
    t = tab.totals
    return FeatureRecord(
        source_id=source_id,
        rows=img.rows,
        cols=img.cols,
        threshold=bin_img.threshold,
        u=t.u,
        z=t.z,
        y=t.y,
        w=t.w,
        n_p=pores.count,
        ipf=ipf(t.u, t.u + t.z),
        c=compactness(t.u, t.y),
        s=scatterness(t.u, t.y),
        p=porousness(t.u, t.w),
        w_avg=average_pore_area(t.w, pores.count),
    )


class Combo(enum.Enum):
    """Feature-vector presets used by the classification experiments."""

    C1 = ("ipf", "c", "w")
    C2 = ("ipf", "c", "w", "n_p")
    C3 = ("ipf", "c", "w", "p")
    C4 = ("ipf", "c", "w", "n_p", "p")

    @property
    def fields(self) -> tuple[str, ...]:
        return self.value

    @property
    def dim(self) -> int:
        return len(self.value)


def combo(rec: FeatureRecord, which: Combo) -> tuple[float, ...]:
    """Feature vector for one record in the preset's fixed field order."""
    return tuple(float(getattr(rec, name)) for name in which.fields)


@dataclass(frozen=True)
class SeriesReport:
    """Feature records for an ordered slice series plus anomaly flags."""

    records: tuple[FeatureRecord, ...]
    flags: tuple[bool, ...]
    anomaly_factor: float

    def to_csv(self) -> str:
        lines = ["slice_id,ipf,c,p,w_avg,flagged"]
        for rec, flagged in zip(self.records, self.flags):
            w_avg = "" if rec.w_avg is None else f"{rec.w_avg:.6f}"
            lines.append(
                f"{rec.source_id},{rec.ipf:.6f},{rec.c:.6f},{rec.p:.6f},{w_avg},"
                f"{'true' if flagged else 'false'}"
            )
        return "\n".join(lines) + "\n"


def flag_anomalies(series: list[FeatureRecord], k: float = 5.0) -> SeriesReport:
    """Flag slices whose average pore area exceeds k times the series median.

    A spike in w_avg is how a faulty slice (e.g. an empty scan ring) shows
    up; slices without pores never flag. Records are ordered by source_id.
    """
    if len(series) < 3:
        raise SeriesTooShortError(f"need at least 3 slices, got {len(series)}")
    ordered = tuple(sorted(series, key=lambda r: r.source_id))
    present = [r.w_avg for r in ordered if r.w_avg is not None]
    if present:
        cutoff = k * statistics.median(present)
        flags = tuple(r.w_avg is not None and r.w_avg > cutoff for r in ordered)
    else:
        flags = tuple(False for _ in ordered)
    return SeriesReport(records=ordered, flags=flags, anomaly_factor=k)
