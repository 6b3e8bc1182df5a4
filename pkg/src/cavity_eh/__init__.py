"""
cavity-eh: four-photon amplitudes in rectangular cavities.

This package evaluates Euler-Heisenberg photon-photon transition
amplitudes between cavity modes exactly, solves the energy matching
condition over box geometries and turns resonant amplitudes into signal
and measurement-time estimates.
"""

__version__ = "0.1.0"

from cavity_eh.amplitudes import (
    AmplitudeValue,
    ProcessSpec,
    ProcessTag,
    matrix_element,
    scatter_2to2_spec,
)
from cavity_eh.models import (
    CavityGeometry,
    Couplings,
    ExperimentConfig,
    GeometryFamily,
    ModeId,
)
from cavity_eh.registry import BaseProcess, ProcessRegistry, get_registry

__all__ = [
    "AmplitudeValue",
    "BaseProcess",
    "CavityGeometry",
    "Couplings",
    "ExperimentConfig",
    "GeometryFamily",
    "ModeId",
    "ProcessRegistry",
    "ProcessSpec",
    "ProcessTag",
    "get_registry",
    "matrix_element",
    "scatter_2to2_spec",
]
