"""Tests for the resonance scanner."""

import math

import pytest

from cavity_eh.exceptions import DegenerateResonanceError, IncompatibleModesError
from cavity_eh.models import GeometryFamily, ModeId
from cavity_eh.resonance import (
    aspect_ratio_for_resonance,
    frequency_key,
    resonance_roots,
    roots_for_keys,
    scan_resonances,
)

TE011 = ModeId.parse("TE011")
TM110 = ModeId.parse("TM110")
TM130 = ModeId.parse("TM130")
RESONANT_R = math.sqrt(math.sqrt(5) - 2)


def test_frequency_key():
    """Test (A, B) for a square cross-section."""
    family = GeometryFamily()

    assert frequency_key(TE011, family) == (1.0, 1.0)
    assert frequency_key(TM110, family) == (2.0, 0.0)
    assert frequency_key(TM130, family) == (10.0, 0.0)


def test_frequency_key_rectangular_family():
    """Test that n is scaled by the x:y ratio."""
    family = GeometryFamily(xy_ratio=2.0)

    assert frequency_key(ModeId.parse("TM210"), family) == (2.0, 0.0)


def test_frequency_key_rejects_slab_modes():
    """Test that resonance scans are for box modes."""
    with pytest.raises(IncompatibleModesError):
        frequency_key(ModeId.one_d(1), GeometryFamily())


class TestResonanceRoots:
    """Tests for single-triple root finding."""

    def test_reference_triple(self):
        """Test r = √(√5 - 2) for TE011 -> TM110 + TM130."""
        r = aspect_ratio_for_resonance(TE011, TM110, TM130)

        assert r == pytest.approx(0.4858682718, abs=1e-10)
        assert r**2 + 2 - math.sqrt(5) == pytest.approx(0.0, abs=1e-12)

    def test_residual_is_small(self):
        """Test that refined roots satisfy the condition."""
        hits = resonance_roots(TE011, TM110, TM130)

        assert len(hits) == 1
        assert hits[0].residual < 1e-10

    def test_no_root(self):
        """Test a triple whose pump is always too light."""
        assert aspect_ratio_for_resonance(TM110, TM130, TM130) is None

    def test_root_outside_range(self):
        """Test that a narrowed range excludes the root."""
        assert resonance_roots(TE011, TM110, TM130, r_min=0.6, r_max=2.0) == []

    def test_degenerate_triple(self):
        """Test that a condition holding at every r is rejected."""
        te101 = ModeId.parse("TE101")

        with pytest.raises(DegenerateResonanceError):
            resonance_roots(TE011, te101, te101)



class TestRootsForKeys:
    """Tests for root finding on raw frequency keys."""

    # 2√(r²+1) - r - c: two roots for √3 < c < 2, one tangent root at c = √3
    PUMP, SIGNAL = (1.0, 1.0), (1.0, 0.0)

    def test_two_roots_between_grid_points(self):
        """Test that a pair of roots inside one coarse grid cell is resolved."""
        keys = (self.PUMP, (0.0, 1.75**2), self.SIGNAL)

        coarse = roots_for_keys(keys, 0.1, 10.0, grid_points=3)
        fine = roots_for_keys(keys, 0.1, 10.0, grid_points=10000)

        assert [r for r, _ in coarse] == pytest.approx([5 / 12, 3 / 4], rel=1e-12)
        assert [r for r, _ in fine] == pytest.approx([5 / 12, 3 / 4], rel=1e-12)
        assert all(residual < 1e-12 for _, residual in coarse)

    @pytest.mark.parametrize("grid_points", [3, 50, 10000])
    def test_tangent_root(self, grid_points):
        """Test that a root where the mismatch touches zero is reported once."""
        keys = (self.PUMP, (0.0, 3.0), self.SIGNAL)

        roots = roots_for_keys(keys, 0.1, 10.0, grid_points=grid_points)

        assert len(roots) == 1
        assert roots[0][0] == pytest.approx(1 / math.sqrt(3), rel=1e-6)
        assert roots[0][1] < 1e-11

    def test_shallow_dip_has_no_root(self):
        """Test that a minimum which stays above zero yields nothing."""
        keys = (self.PUMP, (0.0, 1.7**2), self.SIGNAL)

        assert roots_for_keys(keys, 0.1, 10.0, grid_points=3) == []

    def test_coarse_grid_keeps_reference_root(self):
        """Test that a sign change still brackets the single reference root."""
        hits = resonance_roots(TE011, TM110, TM130, grid_points=3)

        assert [h.r for h in hits] == pytest.approx([RESONANT_R], rel=1e-12)


class TestScanResonances:
    """Tests for the full scan."""

    @pytest.fixture(scope="class")
    def hits(self):
        """Scan with indices up to 3."""
        return scan_resonances(max_index=3, grid_points=2000)

    def test_contains_reference_triple(self, hits):
        """Test that TE011 -> TM110 + TM130 is found."""
        matches = [
            h
            for h in hits
            if (h.pump.label, h.sig1.label, h.sig2.label) == ("TE011", "TM110", "TM130")
        ]

        assert len(matches) == 1
        assert matches[0].r == pytest.approx(RESONANT_R, rel=1e-10)

    def test_sorted_by_r(self, hits):
        """Test the ordering of the hits."""
        rs = [h.r for h in hits]

        assert rs == sorted(rs)

    def test_signal_pairs_are_ordered(self, hits):
        """Test that each unordered signal pair appears once."""
        assert all(h.sig1.label <= h.sig2.label for h in hits)

    def test_hits_are_resonant(self, hits):
        """Test every hit against the frequency functions."""
        family = GeometryFamily()
        for hit in hits:
            (a0, b0), (a1, b1), (a2, b2) = (
                frequency_key(m, family) for m in (hit.pump, hit.sig1, hit.sig2)
            )
            r2 = hit.r**2
            mismatch = (
                2 * math.sqrt(r2 * a0 + b0)
                - math.sqrt(r2 * a1 + b1)
                - math.sqrt(r2 * a2 + b2)
            )
            assert mismatch == pytest.approx(0.0, abs=1e-9)

    def test_to_row(self, hits):
        """Test the table row of a hit."""
        row = hits[0].to_row()

        assert list(row) == ["pump", "sig1", "sig2", "r", "residual", "family"]
        assert row["family"] == "1:1:r"

    @pytest.mark.parametrize("max_index", [0, 9])
    def test_index_bounds(self, max_index):
        """Test that max_index must be in 1..8."""
        with pytest.raises(ValueError):
            scan_resonances(max_index=max_index)

    def test_empty_range(self):
        """Test that an inverted range yields no hits."""
        assert scan_resonances(max_index=2, r_range=(2.0, 1.0)) == []
