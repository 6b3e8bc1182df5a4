"""Test package initialization."""


def test_package_imports():
    """Test that core package imports work."""
    from cavity_eh import (
        CavityGeometry,
        ModeId,
        ProcessRegistry,
        get_registry,
        matrix_element,
    )

    assert CavityGeometry is not None
    assert ModeId is not None
    assert ProcessRegistry is not None
    assert get_registry is not None
    assert matrix_element is not None


def test_version():
    """Test that version is accessible."""
    from cavity_eh import __version__

    assert __version__ is not None
    assert isinstance(__version__, str)
