"""Tests for cavity eigenmodes."""

import numpy as np
import pytest
import sympy

from cavity_eh.exceptions import ModeValidationError
from cavity_eh.models import CavityGeometry, ModeFamily, ModeId
from cavity_eh.modes import (
    decompose_plane_waves,
    electric_profile,
    enumerate_modes,
    magnetic_profile,
    mode_frequency,
    plane_wave_sum,
    validate_mode,
    wavevector,
)
from cavity_eh.trig import dot, integrate_box, integrate_product, is_exact_zero

BOX_MODES = ["TE011", "TE101", "TE121", "TM110", "TM111", "TM212"]


class TestValidateMode:
    """Tests for mode index constraints."""

    @pytest.mark.parametrize("label", ["TM011", "TM101", "TE110", "TE001"])
    def test_invalid_box_modes(self, label):
        """Test that vanishing eigenfunctions are rejected."""
        with pytest.raises(ModeValidationError):
            validate_mode(ModeId.parse(label))

    def test_one_d_needs_positive_harmonic(self):
        """Test that 1-D modes need n >= 1."""
        with pytest.raises(ModeValidationError):
            validate_mode(ModeId.one_d(0, "y"))

    @pytest.mark.parametrize("label", BOX_MODES + ["1D-y:1", "1D-z:4"])
    def test_valid_modes(self, label):
        """Test that valid modes pass through unchanged."""
        mode = ModeId.parse(label)
        assert validate_mode(mode) is mode


class TestFrequencies:
    """Tests for wavevectors and frequencies."""

    def test_te011_in_unit_cube(self):
        """Test ω(TE011) = √2·π in a unit cube."""
        omega = mode_frequency(CavityGeometry.cube(1), ModeId.parse("TE011"))

        assert omega == sympy.sqrt(2) * sympy.pi

    def test_one_d_frequency(self):
        """Test that a slab mode has ω = πn/L_x."""
        geom = CavityGeometry.symbolic()

        omega = mode_frequency(geom, ModeId.one_d(3, "z"))

        assert omega == 3 * sympy.pi / geom.lx

    def test_wavevector(self):
        """Test the exact wavevector components."""
        geom = CavityGeometry.from_ratio(1, 2, 3)

        kx, ky, kz = wavevector(geom, ModeId.parse("TM121"))

        assert kx == sympy.pi / geom.lx
        assert ky == 2 * sympy.pi / geom.ly
        assert kz == sympy.pi / geom.lz


class TestProfiles:
    """Tests for normalised mode profiles."""

    @pytest.fixture
    def geom(self):
        """Box with unequal sides."""
        return CavityGeometry.from_ratio(1, 2, 3)

    @pytest.mark.parametrize("label", BOX_MODES + ["1D-y:2"])
    def test_normalisation(self, geom, label):
        """Test ∫|A|² = V."""
        profile = electric_profile(geom, ModeId.parse(label))

        norm = integrate_box(dot(profile, profile), geom).expr

        assert is_exact_zero(norm - geom.volume)

    @pytest.mark.parametrize("label", BOX_MODES + ["1D-z:3"])
    def test_magnetic_norm(self, geom, label):
        """Test ∫|curl A|² = V·ω²."""
        mode = ModeId.parse(label)
        curl = magnetic_profile(geom, mode)

        norm = integrate_box(dot(curl, curl), geom).expr

        assert is_exact_zero(norm - geom.volume * mode_frequency(geom, mode) ** 2)

    @pytest.mark.parametrize("label", BOX_MODES)
    def test_divergence_free(self, geom, label):
        """Test that box profiles are transverse."""
        assert electric_profile(geom, ModeId.parse(label)).divergence().is_zero()

    def test_tangential_field_vanishes_on_wall(self):
        """Test E_y = E_z = 0 on the x = 0 and x = L_x walls."""
        geom = CavityGeometry.cube(1)
        profile = electric_profile(geom, ModeId.parse("TM121"))
        points = np.array([[0.0, 0.3, 0.7], [1.0, 0.2, 0.4]])

        values = profile.evaluate(points)

        assert np.allclose(values[:, 1:], 0.0)

    def test_te011_orthogonal_to_tm110(self, geom):
        """Test that different modes are orthogonal."""
        a = electric_profile(geom, ModeId.parse("TE011"))
        b = electric_profile(geom, ModeId.parse("TM110"))

        assert integrate_box(dot(a, b), geom).is_zero

    def test_orthonormal_up_to_index_three(self, geom):
        """Test ∫A·A' = V·δ over every box mode with indices at most 3."""
        modes = enumerate_modes(3)
        profiles = [electric_profile(geom, mode) for mode in modes]

        for i, a in enumerate(profiles):
            for j in range(i, len(profiles)):
                b = profiles[j]
                pieces = [
                    integrate_product(u, v, geom).expr
                    for u, v in zip(a.components, b.components)
                ]
                overlap = sympy.Add(*pieces) * a.prefactor * b.prefactor
                expected = geom.volume if i == j else 0

                assert is_exact_zero(overlap - expected), (modes[i].label, modes[j].label)

    def test_profiles_are_cached(self, geom):
        """Test that repeated requests reuse the cached profile."""
        mode = ModeId.parse("TE121")

        assert electric_profile(geom, mode) is electric_profile(geom, mode)


class TestPlaneWaves:
    """Tests for the travelling-wave decomposition."""

    @pytest.mark.parametrize(
        "label,count", [("1D-y:2", 2), ("TE011", 4), ("TM110", 4), ("TM121", 8)]
    )
    def test_component_count(self, label, count):
        """Test the number of plane waves per mode."""
        components = decompose_plane_waves(CavityGeometry.cube(1), ModeId.parse(label))

        assert len(components) == count

    @pytest.mark.parametrize("label", ["1D-z:3", "TE011", "TM121"])
    def test_sum_reproduces_profile(self, label):
        """Test that the plane waves add back up to the standing wave."""
        geom = CavityGeometry.from_ratio(1, 2, 3)
        mode = ModeId.parse(label)
        points = np.random.default_rng(7).uniform(0.0, 1.0 / 3.0, size=(12, 3))

        waves = plane_wave_sum(decompose_plane_waves(geom, mode), points)
        standing = electric_profile(geom, mode).evaluate(points)

        assert np.allclose(waves, standing)

    def test_components_are_transverse(self):
        """Test k·ε = 0 for every travelling wave."""
        components = decompose_plane_waves(CavityGeometry.cube(1), ModeId.parse("TM121"))

        assert all(component.is_transverse() for component in components)

    def test_one_d_harmonics(self):
        """Test that a slab mode splits into ±k along x."""
        components = decompose_plane_waves(CavityGeometry.symbolic(), ModeId.one_d(2, "y"))

        assert [c.harmonics for c in components] == [(2, 0, 0), (-2, 0, 0)]


class TestEnumerateModes:
    """Tests for mode enumeration."""

    def test_box_modes_up_to_one(self):
        """Test the valid modes with every index <= 1."""
        labels = sorted(m.label for m in enumerate_modes(1))

        assert labels == ["TE011", "TE101", "TE111", "TM110", "TM111"]

    def test_one_d_family(self):
        """Test that 1-D families yield n = 1..max_index."""
        modes = enumerate_modes(3, [ModeFamily.ONE_D_Z])

        assert [m.label for m in modes] == ["1D-z:1", "1D-z:2", "1D-z:3"]
