"""Tests for the plane-wave vertex and the merging cross-check."""

import numpy as np
import pytest

from cavity_eh.amplitudes import (
    TE011,
    merge_3to1_1d_spec,
    merge_3to1_3d_spec,
    scatter_2to2_spec,
)
from cavity_eh.exceptions import IncompatibleModesError, MomentumConservationError
from cavity_eh.models import CavityGeometry, ModeId
from cavity_eh.planewave import (
    PlaneWaveLeg,
    PlaneWaveReport,
    dual_invariant,
    eh_four_photon_vertex,
    invariant,
    planewave_consistency,
    vertex_scale,
)
from cavity_eh.wick import Side

X, Y = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)


def leg(k, polarization, side=Side.IN):
    return PlaneWaveLeg.from_vectors(k, polarization, side)


def unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def transverse(rng, k):
    """Random complex polarisation orthogonal to k."""
    e1 = np.cross(k, rng.normal(size=3))
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(k / np.linalg.norm(k), e1)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    return a * e1 + b * e2


def random_scattering(rng):
    """Four non-collinear legs with 1 + 2 -> 3 + 4 in the centre-of-momentum frame."""
    energy = rng.uniform(0.5, 2.0)
    n, m = unit(rng), unit(rng)
    momenta = [energy * n, -energy * n, energy * m, -energy * m]
    sides = [Side.IN, Side.IN, Side.OUT, Side.OUT]
    return [leg(k, transverse(rng, k), side) for k, side in zip(momenta, sides)]


class TestPlaneWaveLeg:
    """Tests for single plane-wave photons."""

    def test_four_momentum(self):
        """Test that ω = |k| is prepended."""
        photon = leg((0.0, 0.0, 2.0), X)

        assert np.allclose(photon.momentum, [2.0, 0.0, 0.0, 2.0])

    def test_longitudinal_polarisation_rejected(self):
        """Test that ε must be transverse to k."""
        with pytest.raises(ValueError):
            leg((0.0, 0.0, 1.0), (0.0, 0.0, 1.0))

    def test_field_strength_antisymmetric(self):
        """Test F^{μν} = -F^{νμ}."""
        f = leg((0.0, 0.0, 1.0), X).field_strength()

        assert np.allclose(f, -f.T)


class TestVertex:
    """Tests for the tree-level quartic vertex."""

    def test_collinear_invariants_vanish(self):
        """Test F·G = F·G̃ = 0 for parallel null waves."""
        f = leg((0.0, 0.0, 1.0), X).field_strength()
        g = leg((0.0, 0.0, 3.0), Y).field_strength()

        assert abs(invariant(f, g)) < 1e-12
        assert abs(dual_invariant(f, g)) < 1e-12

    def test_collinear_vertex_vanishes(self):
        """Test that parallel photons do not interact."""
        legs = [
            leg((0.0, 0.0, 1.0), X),
            leg((0.0, 0.0, 1.0), Y),
            leg((0.0, 0.0, 2.0), X),
            leg((0.0, 0.0, 4.0), X, Side.OUT),
        ]

        assert abs(eh_four_photon_vertex(legs)) < 1e-12

    def test_head_on_invariant(self):
        """Test F·G ≠ 0 for counter-propagating waves."""
        f = leg((0.0, 0.0, 1.0), X).field_strength()
        g = leg((0.0, 0.0, -1.0), X).field_strength()

        assert abs(invariant(f, g)) > 1.0

    def test_head_on_right_angle_vertex(self):
        """Test that head-on photons scattered through 90° interact."""
        legs = [
            leg((0.0, 0.0, 1.0), X),
            leg((0.0, 0.0, -1.0), X),
            leg((1.0, 0.0, 0.0), Y, Side.OUT),
            leg((-1.0, 0.0, 0.0), Y, Side.OUT),
        ]

        assert abs(eh_four_photon_vertex(legs)) > 1.0

    def test_random_collinear_vertices_vanish(self):
        """Test that parallel photons never interact, whatever their polarisation."""
        rng = np.random.default_rng(11)

        for _ in range(100):
            direction = unit(rng)
            energies = rng.uniform(0.2, 1.0, size=3)
            momenta = [e * direction for e in energies] + [energies.sum() * direction]
            sides = [Side.IN, Side.IN, Side.IN, Side.OUT]
            legs = [leg(k, transverse(rng, k), side) for k, side in zip(momenta, sides)]

            value = eh_four_photon_vertex(legs)

            assert abs(value) < 1e-12 * max(1.0, vertex_scale(legs))

    def test_gauge_invariance(self):
        """Test that ε -> ε + c·k on any leg leaves the vertex unchanged."""
        rng = np.random.default_rng(5)

        for _ in range(100):
            legs = random_scattering(rng)
            index = int(rng.integers(0, 4))
            shift = complex(rng.normal(), rng.normal())
            original = legs[index]
            shifted = list(legs)
            shifted[index] = PlaneWaveLeg(
                original.momentum,
                original.polarization + shift * original.momentum,
                original.side,
            )

            before = eh_four_photon_vertex(legs)
            after = eh_four_photon_vertex(shifted)

            assert abs(after - before) < 1e-12 * max(1.0, vertex_scale(legs))

    def test_momentum_must_balance(self):
        """Test that non-conserving tuples are rejected."""
        legs = [leg((0.0, 0.0, 1.0), X)] * 3 + [leg((0.0, 0.0, 1.0), X, Side.OUT)]

        with pytest.raises(MomentumConservationError):
            eh_four_photon_vertex(legs)

    def test_needs_four_legs(self):
        """Test that the vertex takes exactly four legs."""
        with pytest.raises(ValueError):
            eh_four_photon_vertex([leg((0.0, 0.0, 1.0), X)] * 3)


class TestConsistency:
    """Tests for re-evaluating merges in plane waves."""

    @pytest.mark.parametrize("n,p,pols", [(1, 1, "yyyy"), (1, 2, "yyzz")])
    def test_slab_merge(self, n, p, pols):
        """Test that only collinear tuples survive and the sum vanishes."""
        spec = merge_3to1_1d_spec(CavityGeometry.symbolic(), n, p, pols)

        report = planewave_consistency(spec)

        assert report.total_tuples == 16
        assert report.survivors == 2
        assert report.all_collinear
        assert report.consistent
        assert report.cavity_amplitude == 0

    @pytest.mark.parametrize(
        "n,p,pols", [(1, 1, "yzyz"), (2, 1, "zzyy"), (2, 3, "yzzy"), (3, 2, "zzzz")]
    )
    def test_slab_sum_follows_cavity_amplitude(self, n, p, pols):
        """Test that the plane-wave sum cancels to the same exact zero as the cavity value."""
        spec = merge_3to1_1d_spec(CavityGeometry.symbolic(), n, p, pols)

        report = planewave_consistency(spec)

        assert report.survivors > 0
        assert report.magnitude > 0
        assert abs(report.total) <= 1e-10 * report.magnitude
        assert report.cavity_amplitude == 0
        assert report.consistent

    @pytest.mark.parametrize(
        "total,cavity,consistent",
        [
            (1e-14, 0j, True),
            (1e-3, 0j, False),
            (1e-14, 2.0, False),
            (0.5, 2.0, True),
        ],
    )
    def test_consistency_is_relative(self, total, cavity, consistent):
        """Test that cancellation is judged against the size of the survivor terms."""
        report = PlaneWaveReport(
            total_tuples=16,
            survivors=2,
            all_collinear=True,
            reduced_coefficient=0,
            total=complex(total),
            cavity_amplitude=complex(cavity),
            magnitude=1e3,
        )

        assert report.consistent is consistent

    def test_off_resonance_has_no_survivors(self):
        """Test that an energy-violating merge keeps no tuples."""
        spec = merge_3to1_1d_spec(
            CavityGeometry.symbolic(), 1, 1, "yyyy", signal_harmonic=5
        )

        report = planewave_consistency(spec)

        assert report.survivors == 0
        assert report.total == 0

    def test_box_merge_tuple_count(self):
        """Test the 4·4·4·4 tuples of TE011³ -> TE033."""
        spec = merge_3to1_3d_spec(
            CavityGeometry.cube(1), [TE011] * 3, ModeId.parse("TE033")
        )

        report = planewave_consistency(spec)

        assert report.total_tuples == 256
        assert report.survivors > 0
        assert report.cavity_amplitude == 0

    def test_to_dict(self):
        """Test the JSON view of the report."""
        report = planewave_consistency(merge_3to1_1d_spec(CavityGeometry.symbolic(), 1, 1))

        data = report.to_dict()

        assert data["survivors"] == 2
        assert data["consistent"] is True
        assert len(data["total"]) == 2

    def test_rejects_scattering(self):
        """Test that only merging processes are accepted."""
        with pytest.raises(IncompatibleModesError):
            planewave_consistency(scatter_2to2_spec(CavityGeometry.cube(1)))
