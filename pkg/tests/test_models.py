"""Tests for core data models."""

import pytest
import sympy
from pydantic import ValidationError

from cavity_eh.exceptions import GeometryError, ModeValidationError
from cavity_eh.models import (
    CacheConfig,
    CavityGeometry,
    Couplings,
    CouplingsConfig,
    ExperimentConfig,
    GeometryFamily,
    LoggingConfig,
    ModeFamily,
    ModeId,
    OutputConfig,
    ProcessParameters,
)


def test_geometry_cube():
    """Test creating a cube."""
    geom = CavityGeometry.cube(2)

    assert geom.lengths == (2, 2, 2)
    assert geom.volume == 8
    assert geom.area == 4
    assert geom.is_numeric


def test_geometry_one_one_r():
    """Test the 1:1:r family anchored at L_z."""
    geom = CavityGeometry.one_one_r(sympy.Rational(1, 2), lz=3)

    assert geom.lx == 6
    assert geom.ly == 6
    assert geom.aspect_ratio == sympy.Rational(1, 2)


def test_geometry_from_ratio():
    """Test proportions scaled to L_z."""
    geom = CavityGeometry.from_ratio(1, 2, 4, lz=2)

    assert geom.lengths == (sympy.Rational(1, 2), 1, 2)
    assert geom.aspect_ratio is None


def test_geometry_symbolic():
    """Test the symbolic geometry."""
    geom = CavityGeometry.symbolic()

    assert len(geom.free_symbols) == 3
    assert not geom.is_numeric


@pytest.mark.parametrize("side", [0, -1, "abc(", float("inf")])
def test_geometry_rejects_bad_lengths(side):
    """Test that lengths must be positive and finite."""
    with pytest.raises(ValueError):
        CavityGeometry.cube(side)


def test_geometry_parse():
    """Test the Lx:Ly:Lz text form."""
    exact = CavityGeometry.parse("1:2:3")
    scaled = CavityGeometry.parse("1:1:0.5", lz=0.2)

    assert exact.lengths == (1, 2, 3)
    assert isinstance(scaled.lz, sympy.Float)
    assert float(scaled.lx) == pytest.approx(0.4)


@pytest.mark.parametrize("text", ["1:2", "1:2:3:4", "a:b:"])
def test_geometry_parse_invalid(text):
    """Test malformed geometry text."""
    with pytest.raises(GeometryError):
        CavityGeometry.parse(text)


def test_numeric_lengths():
    """Test float lengths with and without substitutions."""
    geom = CavityGeometry.symbolic()
    subs = {symbol: 2.0 for symbol in geom.free_symbols}

    assert geom.numeric_lengths(subs) == (2.0, 2.0, 2.0)
    with pytest.raises(GeometryError):
        geom.numeric_lengths()


def test_cache_key_distinguishes_geometries():
    """Test that different boxes have different cache keys."""
    assert CavityGeometry.cube(1).cache_key() != CavityGeometry.cube(2).cache_key()
    assert CavityGeometry.cube(1).cache_key() == CavityGeometry.cube(1).cache_key()


@pytest.mark.parametrize(
    "text,family,indices",
    [
        ("TE011", ModeFamily.TE, (0, 1, 1)),
        ("tm110", ModeFamily.TM, (1, 1, 0)),
        ("TM(1,10,0)", ModeFamily.TM, (1, 10, 0)),
        ("1D-z:3", ModeFamily.ONE_D_Z, (3, 0, 0)),
    ],
)
def test_mode_parse(text, family, indices):
    """Test parsing mode labels."""
    mode = ModeId.parse(text)

    assert mode.family == family
    assert mode.indices == indices


@pytest.mark.parametrize("text", ["TE01", "XX011", "1D-x:1", ""])
def test_mode_parse_invalid(text):
    """Test that unknown labels are rejected."""
    with pytest.raises(ModeValidationError):
        ModeId.parse(text)


def test_mode_label_round_trip():
    """Test that labels parse back to the same mode."""
    for mode in (ModeId.te(0, 1, 1), ModeId.tm(1, 10, 0), ModeId.one_d(2, "y")):
        assert ModeId.parse(mode.label) == mode


def test_mode_polarization_axis():
    """Test the field axis of slab modes."""
    assert ModeId.one_d(1, "y").polarization_axis == 1
    assert ModeId.one_d(1, "z").polarization_axis == 2
    assert ModeId.parse("TE011").polarization_axis is None


def test_mode_is_hashable():
    """Test that modes can key dictionaries."""
    counts = {ModeId.parse("TE011"): 1}

    assert counts[ModeId.te(0, 1, 1)] == 1


def test_couplings_defaults():
    """Test the default κ = 1, β = 7/4."""
    couplings = Couplings()

    assert couplings.kappa == 1
    assert couplings.beta == sympy.Rational(7, 4)


def test_couplings_accept_symbols():
    """Test symbolic couplings."""
    kappa = sympy.Symbol("kappa", positive=True)

    assert Couplings(kappa=kappa, beta="beta").beta == sympy.Symbol("beta")



@pytest.mark.parametrize("text,value", [("beta", 3), ("2*beta", 6), ("kappa*beta", 6)])
def test_coupling_strings_are_symbols(text, value):
    """Test that coupling names parse to symbols rather than special functions."""
    couplings = Couplings(kappa="kappa", beta=text)

    assert couplings.kappa == sympy.Symbol("kappa", positive=True)
    assert all(isinstance(s, sympy.Symbol) for s in couplings.beta.free_symbols)
    assert not couplings.beta.atoms(sympy.Function)
    assert couplings.beta.subs({sympy.Symbol("beta"): 3, couplings.kappa: 2}) == value


def test_couplings_config_is_exact():
    """Test that decimal couplings become rationals."""
    couplings = CouplingsConfig(kappa=1.0, beta=1.75).to_couplings()

    assert couplings.beta == sympy.Rational(7, 4)
    assert couplings.kappa == 1


def test_geometry_family():
    """Test parsing and labelling geometry families."""
    family = GeometryFamily.parse("2:1:r")

    assert family.xy_ratio == 2.0
    assert family.label == "2:1:r"
    assert GeometryFamily().label == "1:1:r"
    assert family.geometry(1).lengths == (2, 1, 1)


@pytest.mark.parametrize("text", ["1:1", "1:1:s", "0:1:r", "a:1:r"])
def test_geometry_family_invalid(text):
    """Test malformed family labels."""
    with pytest.raises(GeometryError):
        GeometryFamily.parse(text)


def test_experiment_config_defaults():
    """Test ExperimentConfig default values."""
    cfg = ExperimentConfig()

    assert cfg.kappa is None
    assert cfg.beta == 1.75
    assert cfg.lz == 0.2
    assert cfg.signals == ("TM110", "TM130")


def test_experiment_config_normalises_labels():
    """Test that mode labels are stored in canonical form."""
    cfg = ExperimentConfig(pump="te011", signals=("tm110", "TM(1,3,0)"))

    assert cfg.pump == "TE011"
    assert cfg.signals == ("TM110", "TM130")


def test_experiment_config_low_quality_factor():
    """Test that Q below 100 is rejected."""
    with pytest.raises(ValidationError):
        ExperimentConfig(quality_factor=50)


def test_experiment_config_negative_occupations():
    """Test that occupations must be nonnegative."""
    with pytest.raises(ValidationError):
        ExperimentConfig(pump_occupations=(-1.0, 1.0))


def test_cache_config_bounds():
    """Test CacheConfig size validation."""
    assert CacheConfig(max_size=0).max_size == 0

    with pytest.raises(ValidationError):
        CacheConfig(max_size=2000000)


def test_logging_config_level():
    """Test that levels are normalised and validated."""
    assert LoggingConfig(level="debug").level == "DEBUG"

    with pytest.raises(ValidationError):
        LoggingConfig(level="verbose")
    with pytest.raises(ValidationError):
        LoggingConfig(format="xml")


def test_output_config_format():
    """Test OutputConfig format validation."""
    assert OutputConfig(format="table").format == "table"

    with pytest.raises(ValidationError):
        OutputConfig(format="csv")


def test_process_parameters():
    """Test defaults and validation of process parameters."""
    params = ProcessParameters(polarizations="YYZZ", xi=0.5)

    assert params.polarizations == "yyzz"
    assert params.xi == sympy.Float(0.5)
    assert params.signal == "TE033"

    with pytest.raises(ValidationError):
        ProcessParameters(polarizations="yyx")


def test_process_parameters_geometry():
    """Test building the configured geometry."""
    default = CavityGeometry.cube(1)

    assert ProcessParameters().build_geometry(default) is default
    assert ProcessParameters(geometry="symbolic").build_geometry(default).free_symbols
    scaled = ProcessParameters(geometry="1:1:2", lz=4).build_geometry(default)
    assert [float(length) for length in scaled.lengths] == [2.0, 2.0, 4.0]
