"""Row tabulation chart: spans, per-row counts, and totals."""

from __future__ import annotations

import numpy as np
import pytest

from glance import (
    BinaryImage,
    DimensionMismatchError,
    RowCounts,
    label_pores,
    row_tabulation,
)

from conftest import WALKTHROUGH_TOTALS, mask_from_rows, random_mask
from oracles import row_chart


def tabulate(mask: np.ndarray):
    binary = BinaryImage(mask, threshold=0)
    return row_tabulation(binary, label_pores(binary))


class TestWalkthroughGrid:
    def test_per_row_chart(self, walkthrough_mask):
        tab = tabulate(walkthrough_mask)
        assert tab.per_row == (
            RowCounts(2, 2, 2, 0, 0),
            RowCounts(3, 3, 1, 0, 0),
            RowCounts(3, 2, 2, 1, 1),
            RowCounts(4, 4, 0, 0, 0),
            RowCounts(3, 2, 2, 1, 0),
            RowCounts(4, 2, 2, 2, 0),
        )

    def test_totals(self, walkthrough_mask):
        totals = tabulate(walkthrough_mask).totals
        assert totals == RowCounts(
            WALKTHROUGH_TOTALS["L"],
            WALKTHROUGH_TOTALS["u"],
            WALKTHROUGH_TOTALS["z"],
            WALKTHROUGH_TOTALS["y"],
            WALKTHROUGH_TOTALS["w"],
        )

    def test_csv_golden(self, walkthrough_mask):
        expected = (
            "row,L,u,z,y,w\n"
            "R1,2,2,2,0,0\n"
            "R2,3,3,1,0,0\n"
            "R3,3,2,2,1,1\n"
            "R4,4,4,0,0,0\n"
            "R5,3,2,2,1,0\n"
            "R6,4,2,2,2,0\n"
            "Total,19,15,9,4,1\n"
        )
        assert tabulate(walkthrough_mask).to_csv() == expected


class TestRowConventions:
    def test_empty_row_contributes_only_z(self):
        mask = mask_from_rows(("000", "010", "000"))
        tab = tabulate(mask)
        assert tab.per_row[0] == RowCounts(0, 0, 3, 0, 0)
        assert tab.per_row[1] == RowCounts(1, 1, 2, 0, 0)
        assert tab.per_row[2] == RowCounts(0, 0, 3, 0, 0)

    def test_span_is_inclusive(self):
        tab = tabulate(mask_from_rows(("10001",)))
        assert tab.per_row[0] == RowCounts(5, 2, 3, 3, 0)

    def test_single_pixel_row(self):
        tab = tabulate(mask_from_rows(("1",)))
        assert tab.per_row[0] == RowCounts(1, 1, 0, 0, 0)
        assert tab.image_size == 1

    def test_y_counts_only_in_span_gaps(self):
        # leading/trailing background is z but never y
        tab = tabulate(mask_from_rows(("0011010",)))
        assert tab.per_row[0] == RowCounts(4, 3, 4, 1, 0)


class TestDimensionChecks:
    def test_mismatched_pore_map(self, walkthrough_mask):
        other = BinaryImage(np.ones((2, 2), dtype=bool), threshold=0)
        binary = BinaryImage(walkthrough_mask, threshold=0)
        with pytest.raises(DimensionMismatchError):
            row_tabulation(binary, label_pores(other))


class TestOracleEquivalence:
    def test_matches_loop_reference_on_random_masks(self):
        rng = np.random.default_rng(4242)
        for _ in range(150):
            mask = random_mask(rng, max_side=24)
            tab = tabulate(mask)
            expected = row_chart(mask.tolist())
            got = [(r.L, r.u, r.z, r.y, r.w) for r in tab.per_row]
            assert got == expected

    def test_row_identities_always_hold(self):
        rng = np.random.default_rng(4343)
        for _ in range(100):
            mask = random_mask(rng, max_side=24)
            tab = tabulate(mask)
            for r in tab.per_row:
                assert r.y == r.L - r.u
                assert r.u + r.z == tab.cols
                assert r.w <= r.y
            totals = tab.totals
            assert totals.u + totals.z == tab.image_size
